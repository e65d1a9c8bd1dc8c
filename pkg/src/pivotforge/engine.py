"""Active-set and simplex vertex walks over box programs.

Both methods run the same outer loop: while a feasible improving direction
exists, pick one by the pivot rule, drop an active row that blocks it,
move as far as the box (and, for the active-set method, the sign of the
directional derivative) allows, and record a new active row when the move
stops on the boundary.  One iteration is one pass of that loop; a pass may
both drop and add a row.

Directions are signed unit axis directions.  On a box the feasible cone at
any point is a product of per-coordinate half-lines or lines, so a feasible
improving direction exists iff a feasible improving *axis* direction
exists, and axis directions always attain the maximum number of orthogonal
active rows.  The candidate set is therefore finite and the stopping
criterion ("no candidates") is exactly first-order criticality.

The line-search step is exact:

    mu = min( largest feasible step,
              first t >= 0 where the edge restriction g(t) <= 0 )

with ``g`` the exact univariate polynomial ``grad f(x + t d)^T d``.  An
irrational objective-side stopping point aborts the run with an error
outcome instead of rounding.

Every pass is recorded; trajectories are the audit trail all certification
checks run against, and they serialize to deterministic JSON/CSV.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

from .boxes import AxisDirection, BoxProgram, Point, as_point
from .errors import (
    DimensionMismatchError,
    InfeasiblePointError,
    NotAVertexError,
    NotRepresentableError,
)
from .objectives import LinearObjective
from .polynomials import first_nonpositive
from .scalars import Rational, format_rational

OUTCOME_CRITICAL_POINT = "critical_point"
OUTCOME_ERROR = "error"

STOP_CRITICAL_POINT = "critical_point"
STOP_MAX_ITER = "max_iter_exceeded"
STOP_NOT_REPRESENTABLE = "not_representable"


class Candidate(NamedTuple):
    """A feasible improving axis direction, annotated with its directional
    derivative and the number of active rows orthogonal to it."""

    direction: AxisDirection
    slope: Rational
    overlap: int


class PivotRule(ABC):
    """Tie-breaking policy for the direction and the dropped/added rows.

    Implementations must select from the offered nonempty options and be
    deterministic given their own internal state.
    """

    name = "abstract"

    @abstractmethod
    def choose_direction(self, candidates: Sequence[Candidate]) -> Candidate: ...

    @abstractmethod
    def choose_removal(self, rows: Sequence[int]) -> int: ...

    @abstractmethod
    def choose_addition(self, rows: Sequence[int]) -> int: ...


class LowestIndexRule(PivotRule):
    name = "lowest-index"

    def choose_direction(self, candidates):
        return min(candidates, key=lambda c: c.direction.coord)

    def choose_removal(self, rows):
        return min(rows)

    def choose_addition(self, rows):
        return min(rows)


class HighestIndexRule(PivotRule):
    name = "highest-index"

    def choose_direction(self, candidates):
        return max(candidates, key=lambda c: c.direction.coord)

    def choose_removal(self, rows):
        return max(rows)

    def choose_addition(self, rows):
        return max(rows)


class SteepestRule(PivotRule):
    """Largest directional derivative, lowest coordinate on ties."""

    name = "steepest"

    def choose_direction(self, candidates):
        return max(candidates, key=lambda c: (c.slope, -c.direction.coord))

    def choose_removal(self, rows):
        return min(rows)

    def choose_addition(self, rows):
        return min(rows)


class SeededRandomRule(PivotRule):
    """Reproducible random choices from an explicit seed.

    Singleton option sets are returned without consuming entropy: forced
    moves are not decisions, so two runs that present the same genuine
    choice points draw the same random stream even if they differ in how
    many forced selections they route through the rule.
    """

    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rng = random.Random(seed)

    def _pick(self, options):
        if len(options) == 1:
            return options[0]
        return options[self._rng.randrange(len(options))]

    def choose_direction(self, candidates):
        return self._pick(candidates)

    def choose_removal(self, rows):
        return self._pick(rows)

    def choose_addition(self, rows):
        return self._pick(rows)


RULE_NAMES = ("lowest-index", "highest-index", "steepest", "random")


def make_rule(name: str, seed: int = 0) -> PivotRule:
    """Fresh pivot-rule instance by name (seed only matters for "random")."""
    factories = builtin_rules()
    if name not in factories:
        raise ValueError(f"unknown rule {name!r}; expected one of {RULE_NAMES}")
    return factories[name](seed)


def builtin_rules() -> dict:
    """Name -> factory for the built-in rules.  Each factory takes a seed
    and returns a fresh, deterministic rule instance."""
    return {
        "lowest-index": lambda seed=0: LowestIndexRule(),
        "highest-index": lambda seed=0: HighestIndexRule(),
        "steepest": lambda seed=0: SteepestRule(),
        "random": lambda seed=0: SeededRandomRule(seed),
    }


@dataclass(slots=True)
class IterationRecord:
    """One while-loop pass: what was chosen, dropped, added, and where the
    iterate moved.  ``x_after == x_before`` when the pass only dropped a
    row; ``stop_reason`` is set on the final record only."""

    index: int
    x_before: Point
    active_before: tuple
    direction: Optional[AxisDirection]
    removed_row: Optional[int]
    step: Optional[Rational]
    x_after: Point
    added_row: Optional[int]
    num_candidates: int
    stop_reason: Optional[str] = None


@dataclass
class Trajectory:
    """Ordered record of a run; one record per while-loop pass."""

    program: BoxProgram
    start: Point
    records: list
    outcome: str
    stop_reason: str

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def final_point(self) -> Point:
        return self.records[-1].x_after if self.records else self.start

    def points(self) -> list:
        """The sequence of iterates: start point, then each pass's result."""
        return [self.start] + [r.x_after for r in self.records]

    def vertex_ids(self) -> list:
        """Vertex ids of the iterate sequence (None for non-vertices)."""
        out = []
        for p in self.points():
            out.append(self.program.vertex_id(p) if self.program.is_vertex(p) else None)
        return out

    def to_json_dict(self, objective, rule_name: Optional[str] = None,
                     approx: bool = False) -> dict:
        """Deterministic JSON form; all numbers are exact ``"p/q"`` strings
        (an optional lossy float column is added only on request)."""

        def point_json(p):
            return [format_rational(c) for c in p]

        def vid(p):
            return self.program.vertex_id(p) if self.program.is_vertex(p) else None

        records = []
        for r in self.records:
            value_after = objective.value(r.x_after)
            rec = {
                "iteration": r.index,
                "point": point_json(r.x_before),
                "vertex_id": vid(r.x_before),
                "active_rows": list(r.active_before),
                "num_candidates": r.num_candidates,
                "direction": (
                    {"coord": r.direction.coord, "sign": r.direction.sign}
                    if r.direction is not None
                    else None
                ),
                "removed_row": r.removed_row,
                "step": format_rational(r.step) if r.step is not None else None,
                "added_row": r.added_row,
                "point_after": point_json(r.x_after),
                "vertex_id_after": vid(r.x_after),
                "objective_value": format_rational(value_after),
                "stop_reason": r.stop_reason,
            }
            if approx:
                rec["objective_value_approx_lossy"] = float(value_after)
            records.append(rec)
        final_value = objective.value(self.final_point)
        out = {
            "n": self.program.n,
            "rule": rule_name,
            "outcome": self.outcome,
            "stop_reason": self.stop_reason,
            "iterations": self.iterations,
            "start": {"point": point_json(self.start), "vertex_id": vid(self.start)},
            "final": {
                "point": point_json(self.final_point),
                "vertex_id": vid(self.final_point),
                "objective_value": format_rational(final_value),
            },
            "records": records,
        }
        if approx:
            out["final"]["objective_value_approx_lossy"] = float(final_value)
        return out

    def summary_row(self, objective, rule_name: str, approx: bool = False) -> dict:
        """One CSV row: n, rule, iterations, final_vertex_id, final_value."""
        value = objective.value(self.final_point)
        row = {
            "n": self.program.n,
            "rule": rule_name,
            "iterations": self.iterations,
            "final_vertex_id": (
                self.program.vertex_id(self.final_point)
                if self.program.is_vertex(self.final_point)
                else ""
            ),
            "final_value": format_rational(value),
        }
        if approx:
            row["final_value_approx_lossy"] = float(value)
        return row


def improving_candidates(program: BoxProgram, objective, x: Point,
                         active: frozenset) -> list:
    """Feasible improving axis directions at ``x``, restricted to those
    orthogonal to the maximum number of rows in ``active``.

    Feasibility is with respect to every row tight at ``x`` (not just the
    maintained active set); on a box that is a per-coordinate bound check.
    Empty exactly when ``x`` is a critical point.  Candidates come back
    sorted by coordinate.
    """
    grad = objective.gradient(x)
    n = program.n
    lower, upper = program.lower, program.upper
    base = len(active)
    candidates = []
    for k in range(1, n + 1):
        xk = x[k - 1]
        if not lower[k - 1] <= xk <= upper[k - 1]:
            raise InfeasiblePointError(f"point {x} violates a bound")
        gk = grad[k - 1]
        if gk == 0:
            continue
        if gk > 0:
            if xk == upper[k - 1]:  # +e_k would leave the box
                continue
            direction, slope = AxisDirection(k, 1), gk
        else:
            if xk == lower[k - 1]:  # -e_k would leave the box
                continue
            direction, slope = AxisDirection(k, -1), -gk
        overlap = base - (k in active) - (k + n in active)
        candidates.append(Candidate(direction, slope, overlap))
    if not candidates:
        return []
    best = max(c.overlap for c in candidates)
    return [c for c in candidates if c.overlap == best]


def _check_dimensions(program: BoxProgram, objective) -> None:
    if objective.n != program.n:
        raise DimensionMismatchError(
            f"objective dimension {objective.n} != program dimension {program.n}"
        )


def _entering_rows(program: BoxProgram, x: Point, active: set) -> list:
    """Rows tight at ``x`` but not yet active (``eq_set(x) - active``),
    sorted, without materializing the full tight set."""
    n = program.n
    lower, upper = program.lower, program.upper
    uppers = []
    lowers = []
    for i in range(1, n + 1):
        xi = x[i - 1]
        if xi == upper[i - 1] and i not in active:
            uppers.append(i)
        if xi == lower[i - 1] and i + n not in active:
            lowers.append(i + n)
    return uppers + lowers


def active_set_run(program: BoxProgram, objective, start: Point, rule: PivotRule,
                   max_iter: Optional[int] = None) -> Trajectory:
    """Run the active-set method from ``start`` until a critical point.

    The active set starts as the full tight set of ``start``.  Each pass:
    select a maximum-overlap improving candidate by the rule; if some
    active row is not orthogonal to it, drop one rule-chosen row with
    negative inner product; once the remaining active rows are all
    orthogonal (possibly within the same pass), take the exact step

        mu = min(step to the boundary, first zero of the edge restriction)

    and, when the directional derivative at the new point is still
    positive (the move stopped on the boundary), add one rule-chosen newly
    tight row.  Returns an error trajectory on iteration overrun or an
    irrational stopping point.
    """
    _check_dimensions(program, objective)
    start = as_point(start)
    program.require_feasible(start)
    if max_iter is None:
        max_iter = 2 ** (program.n + 1)
    n = program.n
    active = set(program.eq_set(start))
    x = start
    records = []

    while True:
        candidates = improving_candidates(program, objective, x, active)
        if not candidates:
            outcome, stop = OUTCOME_CRITICAL_POINT, STOP_CRITICAL_POINT
            break
        if len(records) >= max_iter:
            outcome, stop = OUTCOME_ERROR, STOP_MAX_ITER
            break
        chosen = rule.choose_direction(candidates)
        d = chosen.direction
        k = d.coord
        x_before = x
        active_before = tuple(sorted(active))
        removed = None
        # only the two rows on coordinate k have nonzero inner product with
        # an axis direction, so the scans over the active set reduce to them
        violating = [
            row for row in (k, k + n)
            if row in active and d.row_dot(row, n) < 0
        ]
        if violating:
            removed = rule.choose_removal(violating)
            active.discard(removed)
        step = None
        added = None
        error_stop = None
        if k not in active and k + n not in active:
            mu_boundary = program.step_to_boundary(x, d)
            g = objective.edge_restriction(x, d)
            try:
                mu_objective = first_nonpositive(g, mu_boundary)
            except NotRepresentableError:
                error_stop = STOP_NOT_REPRESENTABLE
            if error_stop is None:
                mu = mu_boundary if mu_objective is None else mu_objective
                x = program.move(x, d, mu)
                step = mu
                if g.eval(mu) > 0:
                    options = _entering_rows(program, x, active)
                    if not options:
                        raise RuntimeError(
                            "boundary stop produced no new tight row; "
                            "box invariant violated"
                        )
                    added = rule.choose_addition(options)
                    active.add(added)
        records.append(
            IterationRecord(
                index=len(records) + 1,
                x_before=x_before,
                active_before=active_before,
                direction=d,
                removed_row=removed,
                step=step,
                x_after=x,
                added_row=added,
                num_candidates=len(candidates),
            )
        )
        if error_stop is not None:
            outcome, stop = OUTCOME_ERROR, error_stop
            break

    if records:
        records[-1].stop_reason = stop
    return Trajectory(program=program, start=start, records=records,
                      outcome=outcome, stop_reason=stop)


def simplex_run(program: BoxProgram, objective: LinearObjective, start: Point,
                rule: PivotRule, max_iter: Optional[int] = None) -> Trajectory:
    """Run the simplex method on a linear objective from a start vertex.

    The basis is the full tight set of the current vertex.  Each pass picks
    an improving edge direction (on a box: a feasible improving axis
    direction; all of them are orthogonal to exactly n-1 basis rows), drops
    the unique basis row with negative inner product, moves to the opposite
    boundary, and adds the unique newly tight row.  Non-degeneracy of the
    box makes both choices unique, which is asserted.
    """
    if not isinstance(objective, LinearObjective):
        raise TypeError("simplex_run requires a LinearObjective")
    _check_dimensions(program, objective)
    start = as_point(start)
    if not program.is_vertex(start):
        raise NotAVertexError(f"simplex must start at a vertex, got {start}")
    if max_iter is None:
        max_iter = 2 ** (program.n + 1)
    n = program.n
    basis = set(program.eq_set(start))
    x = start
    records = []

    while True:
        candidates = improving_candidates(program, objective, x, basis)
        if not candidates:
            outcome, stop = OUTCOME_CRITICAL_POINT, STOP_CRITICAL_POINT
            break
        if len(records) >= max_iter:
            outcome, stop = OUTCOME_ERROR, STOP_MAX_ITER
            break
        assert all(c.overlap == n - 1 for c in candidates)
        chosen = rule.choose_direction(candidates)
        d = chosen.direction
        x_before = x
        basis_before = tuple(sorted(basis))
        violating = [i for i in basis if d.row_dot(i, n) < 0]
        assert len(violating) == 1, "non-degenerate vertex must have one blocking row"
        removed = violating[0]
        basis.discard(removed)
        mu = program.step_to_boundary(x, d)
        x = program.move(x, d, mu)
        assert program.is_vertex(x)
        options = sorted(program.eq_set(x) - basis)
        assert len(options) == 1, "non-degenerate vertex must have one entering row"
        added = rule.choose_addition(options)
        basis.add(added)
        records.append(
            IterationRecord(
                index=len(records) + 1,
                x_before=x_before,
                active_before=basis_before,
                direction=d,
                removed_row=removed,
                step=mu,
                x_after=x,
                added_row=added,
                num_candidates=len(candidates),
            )
        )

    if records:
        records[-1].stop_reason = stop
    return Trajectory(program=program, start=start, records=records,
                      outcome=outcome, stop_reason=stop)


def equivalence_check(program: BoxProgram, objective: LinearObjective, start: Point,
                      rule_factory: Callable[[], PivotRule]):
    """Do the active-set and simplex methods visit the same points?

    Runs both from ``start`` with fresh rule instances from the shared
    factory and compares the full iterate sequences.  Returns
    ``(True, None)`` on agreement, else ``(False, divergence)`` where the
    divergence names the first differing position.
    """
    active_set_traj = active_set_run(program, objective, start, rule_factory())
    simplex_traj = simplex_run(program, objective, start, rule_factory())
    a_pts = active_set_traj.points()
    s_pts = simplex_traj.points()
    for i in range(max(len(a_pts), len(s_pts))):
        a = a_pts[i] if i < len(a_pts) else None
        s = s_pts[i] if i < len(s_pts) else None
        if a != s:
            return False, {
                "index": i,
                "active_set": a,
                "simplex": s,
                "active_set_length": len(a_pts),
                "simplex_length": len(s_pts),
            }
    return True, None
