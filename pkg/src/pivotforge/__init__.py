"""Exact-arithmetic active-set and simplex runs on box polytopes, plus the
machinery to certify their worst-case hypercube behavior by brute force."""

from .boxes import AxisDirection, BoxProgram, bits_from_id, bits_to_id
from .engine import (
    Candidate,
    IterationRecord,
    PivotRule,
    Trajectory,
    active_set_run,
    builtin_rules,
    equivalence_check,
    improving_candidates,
    make_rule,
    simplex_run,
)
from .errors import (
    AmbiguousImprovementError,
    DimacsParseError,
    DimensionMismatchError,
    InfeasiblePointError,
    NotAVertexError,
    NotRepresentableError,
    PivotforgeError,
    TieError,
    TooLargeError,
)
from .objectives import (
    LinearObjective,
    LowerBoundPolynomial,
    MultiPolyObjective,
    ObjectiveOracle,
    PaddedObjective,
    alpha,
    beta,
    expand,
    f_value,
    pad,
    partial_closed_form,
)
from .polynomials import (
    MultiPoly,
    UniPoly,
    first_nonpositive,
    multi_arith,
    multi_eval,
    uni_eval,
)
from .satreduce import (
    CnfFormula,
    Literal,
    brute_force_max,
    brute_force_sat,
    parse_dimacs,
    violation_polynomial,
)
from .scalars import DualNumber, Rational, as_rational, format_rational, parse_rational
from .structure import (
    Face,
    GrayPath,
    Orientation,
    combed_dimension,
    faces,
    hamiltonian_path,
    improving_dimension,
    induce_orientation,
    is_decomposable,
    is_uso,
    pp,
    reflected_gray_ids,
    s_parity,
    sink_find_decomposable,
)

__version__ = "0.1.0"
