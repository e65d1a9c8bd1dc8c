"""Batch command-line interface.

Four subcommands: ``run`` executes the active-set method on the
lower-bound objective and writes the trajectory; ``verify`` runs one
named certification check and exits 0/1 with a machine-readable witness
on failure; ``export`` writes polynomial/orientation/path artifacts;
``reduce`` converts a DIMACS CNF file into its clause-penalty polynomial.

All numeric output is exact ``"p/q"`` strings; ``--approx`` adds clearly
marked lossy decimal fields.  Identical commands (and seeds) produce
byte-identical output files.  Exit codes: 0 pass, 1 property violation or
engine error (with a witness), 2 usage or parse errors.

Dimension caps guard the exponential scans (USO-style face scans <= 10,
engine runs and vertex scans <= 20, SAT enumeration <= 24); the
``PIVOTFORGE_MAX_N`` environment variable replaces all caps when set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

from .boxes import AxisDirection, BoxProgram, bits_from_id
from .engine import (
    OUTCOME_CRITICAL_POINT,
    RULE_NAMES,
    active_set_run,
    equivalence_check,
    make_rule,
)
from .errors import DimacsParseError, PivotforgeError
from .objectives import (
    LinearObjective,
    LowerBoundPolynomial,
    expand,
    pad,
    partial_closed_form,
)
from .satreduce import (
    brute_force_max,
    brute_force_sat,
    parse_dimacs,
    violated_clause_count,
    violation_polynomial,
)
from .scalars import format_rational
from .structure import (
    combed_dimension,
    faces,
    hamiltonian_path,
    improving_dimension,
    induce_orientation,
    is_decomposable,
    is_uso,
    reflected_gray_ids,
    sink_find_decomposable,
)

DEFAULT_CAPS = {"run": 20, "face-scan": 10, "sat": 24}

#: the property each verify subcommand certifies, shown in --help
CHECK_CLAIMS = {
    "uniqueness": "every non-optimal 0/1 vertex has exactly one improving "
                  "dimension, and the gradient-sign and prefix/parity "
                  "characterizations agree; the optimal vertex has none",
    "gradient": "the closed-form vertex partial derivatives equal the "
                "forward-mode derivatives of the recursion at every vertex "
                "and coordinate",
    "path": "iterating the unique improving dimension from the origin walks "
            "a Hamiltonian path that equals the engine trajectory and the "
            "reflected binary Gray code, and satisfies the half-reflection law",
    "constancy": "along the unique improving edge at any non-optimal vertex "
                 "the improving partial derivative is constant in the edge "
                 "parameter and the edge restriction has degree 0",
    "equivalence": "on random linear objectives with distinct vertex values, "
                   "the active-set and simplex methods visit identical vertex "
                   "sequences under a shared pivot rule",
    "uso": "the induced orientation has exactly one sink in every face, is "
           "combed on every subcube, and is combed in each subcube's highest "
           "free dimension",
    "sink": "the descent sink finder returns the brute-force optimum vertex "
            "with at most 2n value queries",
    "sat": "the clause-penalty polynomial has total degree <= 3, equals minus "
           "the violated-clause count on every vertex, and attains maximum 0 "
           "over the cube exactly on satisfiable formulas",
}


def _usage_error(message: str) -> "SystemExit":
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(2)


def _cap(kind: str) -> int:
    override = os.environ.get("PIVOTFORGE_MAX_N")
    if override:
        try:
            return int(override)
        except ValueError:
            raise _usage_error(f"PIVOTFORGE_MAX_N must be an integer, got {override!r}")
    return DEFAULT_CAPS[kind]


def _check_cap(n: int, kind: str, what: str) -> None:
    cap = _cap(kind)
    if n > cap:
        raise _usage_error(
            f"n={n} exceeds the {what} cap {cap} (set PIVOTFORGE_MAX_N to override)"
        )
    if n < 1:
        raise _usage_error("n must be at least 1")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _print_witness(check: str, witness: dict) -> None:
    print(_json_text({"check": check, "result": "fail", "witness": witness}), end="")


# ---------------------------------------------------------------- run --


def cmd_run(args) -> int:
    n = args.n
    _check_cap(n, "run", "engine-run")
    ambient = args.pad_to if args.pad_to is not None else n
    if ambient < n:
        raise _usage_error("--pad-to must be at least --n")
    _check_cap(ambient, "run", "engine-run")
    inner = LowerBoundPolynomial(n)
    objective = pad(inner, ambient) if ambient > n else inner
    program = BoxProgram.unit_cube(ambient)
    rule = make_rule(args.rule, args.seed)
    trajectory = active_set_run(program, objective, (0,) * ambient, rule,
                                max_iter=args.max_iter)
    label = args.rule if args.rule != "random" else f"random(seed={args.seed})"
    if args.format == "json":
        payload = _json_text(trajectory.to_json_dict(objective, rule_name=label,
                                                     approx=args.approx))
        default_name = f"trajectory_n{n}" + (
            f"_pad{ambient}" if ambient > n else "") + f"_{args.rule}.json"
    else:
        row = trajectory.summary_row(objective, label, approx=args.approx)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(row))
        writer.writeheader()
        writer.writerow(row)
        payload = buffer.getvalue()
        default_name = f"trajectory_n{n}" + (
            f"_pad{ambient}" if ambient > n else "") + f"_{args.rule}.csv"
    out = args.out or default_name
    _write_text(out, payload)
    final = trajectory.final_point
    final_id = program.vertex_id(final) if program.is_vertex(final) else "-"
    value = format_rational(objective.value(final))
    pad_note = f" pad_to={ambient}" if ambient > n else ""
    print(f"n={n}{pad_note} rule={args.rule} iterations={trajectory.iterations} "
          f"final={final_id} value={value} outcome={trajectory.outcome} file={out}")
    return 0 if trajectory.outcome == OUTCOME_CRITICAL_POINT else 1


# ------------------------------------------------------------- verify --


def _verify_uniqueness(args):
    n = args.n
    oracle = LowerBoundPolynomial(n)
    optimum = tuple(1 if i == n - 1 else 0 for i in range(n))
    for vid in range(1 << n):
        bits = bits_from_id(vid, n)
        k = improving_dimension(bits, oracle)  # raises on any disagreement
        if (k is None) != (bits == optimum):
            return False, {"vertex_id": vid, "bits": list(bits), "dimension": k}
    return True, None


def _verify_gradient(args):
    n = args.n
    oracle = LowerBoundPolynomial(n)
    for vid in range(1 << n):
        bits = bits_from_id(vid, n)
        for k in range(1, n + 1):
            closed = partial_closed_form(n, k, bits)
            forward = oracle.partial(bits, k)
            if closed != forward:
                return False, {
                    "vertex_id": vid, "k": k,
                    "closed_form": format_rational(closed),
                    "forward_mode": format_rational(forward),
                }
    return True, None


def _verify_path(args):
    n = args.n
    oracle = LowerBoundPolynomial(n)
    path = hamiltonian_path(n, oracle)
    ids = list(path.vertex_ids)
    if sorted(ids) != list(range(1 << n)) or ids[-1] != 1 << (n - 1):
        return False, {"reason": "not a Hamiltonian path to the optimum",
                       "path": ids}
    for a, b in zip(ids, ids[1:]):
        if bin(a ^ b).count("1") != 1:
            return False, {"reason": "non-adjacent step", "from": a, "to": b}
    if ids != reflected_gray_ids(n):
        return False, {"reason": "differs from the reflected Gray code",
                       "path": ids, "gray": reflected_gray_ids(n)}
    if n >= 2:  # half-reflection: second half = reversed first half + top bit
        half = 1 << (n - 1)
        top = 1 << (n - 1)
        expected = [v | top for v in reversed(ids[:half])]
        if ids[half:] != expected:
            return False, {"reason": "half-reflection law violated", "path": ids}
    program = BoxProgram.unit_cube(n)
    trajectory = active_set_run(program, oracle, (0,) * n, make_rule("lowest-index"))
    if trajectory.vertex_ids() != ids:
        return False, {"reason": "engine trajectory differs from the path",
                       "engine": trajectory.vertex_ids(), "path": ids}
    return True, None


def _verify_constancy(args):
    n = args.n
    oracle = LowerBoundPolynomial(n)
    program = BoxProgram.unit_cube(n)
    samples = [Fraction(j, 10) for j in range(11)]
    for vid in range(1 << n):
        bits = bits_from_id(vid, n)
        k = improving_dimension(bits, oracle)
        if k is None:
            continue
        sign = 1 - 2 * bits[k - 1]
        base = oracle.partial(bits, k)
        for mu in samples:
            point = tuple(
                bits[i] + sign * mu if i == k - 1 else bits[i] for i in range(n)
            )
            if oracle.partial(point, k) != base:
                return False, {"vertex_id": vid, "k": k, "mu": format_rational(mu)}
        g = oracle.edge_restriction(bits, AxisDirection(k, sign))
        if g.degree > 0:
            return False, {"vertex_id": vid, "k": k,
                           "restriction_degree": g.degree}
    return True, None


def _random_linear_objective(rng: random.Random, n: int) -> LinearObjective:
    """Random rational coefficients, resampled until all 2^n vertex values
    are distinct (checked by exact subset-sum enumeration)."""
    while True:
        c = tuple(Fraction(rng.randint(-60, 60), rng.randint(1, 9)) for _ in range(n))
        sums = [Fraction(0)]
        for ci in c:
            sums += [s + ci for s in sums]
        if len(set(sums)) == len(sums):
            return LinearObjective(c)


def _verify_equivalence(args):
    n = args.n
    program = BoxProgram.unit_cube(n)
    rng = random.Random(args.seed)
    for trial in range(args.trials):
        objective = _random_linear_objective(rng, n)
        start = program.vertex_from_bits(tuple(rng.randint(0, 1) for _ in range(n)))
        rule_name = RULE_NAMES[trial % len(RULE_NAMES)]
        rule_seed = rng.randrange(2 ** 30)
        same, divergence = equivalence_check(
            program, objective, start, lambda: make_rule(rule_name, rule_seed)
        )
        if not same:
            return False, {
                "trial": trial,
                "rule": rule_name,
                "c": [format_rational(ci) for ci in objective.c],
                "start": list(program.bits_of_vertex(start)),
                "divergence": {
                    "index": divergence["index"],
                    "active_set": divergence["active_set"] and [
                        format_rational(v) for v in divergence["active_set"]],
                    "simplex": divergence["simplex"] and [
                        format_rational(v) for v in divergence["simplex"]],
                },
            }
    return True, None


def _verify_uso(args):
    n = args.n
    orientation = induce_orientation(LowerBoundPolynomial(n), n)
    ok, witness = is_uso(orientation)
    if not ok:
        return False, {"reason": "face without a unique sink", **witness}
    ok, witness = is_decomposable(orientation)
    if not ok:
        return False, {"reason": "uncombed subcube", **witness}
    for face in faces(n, min_dimension=1):
        if max(face.free_coords) not in combed_dimension(orientation, face):
            return False, {"reason": "not combed in the highest free dimension",
                           "face": face.json_pattern()}
    return True, None


def _verify_sink(args):
    n = args.n
    oracle = LowerBoundPolynomial(n)
    vid, queries = sink_find_decomposable(lambda bits: oracle.value(bits), n)
    values = [oracle.value(bits_from_id(v, n)) for v in range(1 << n)]
    argmax = max(range(1 << n), key=lambda v: values[v])
    if vid != argmax or queries > 2 * n:
        return False, {"found": vid, "argmax": argmax, "queries": queries,
                       "query_budget": 2 * n}
    return True, None


def _random_formula(rng: random.Random, max_vars: int = 12, max_clauses: int = 20):
    from .satreduce import CnfFormula, Literal

    n_vars = rng.randint(1, max_vars)
    n_clauses = rng.randint(0, max_clauses)
    clauses = []
    for _ in range(n_clauses):
        width = rng.randint(1, min(3, n_vars))
        variables = rng.sample(range(1, n_vars + 1), width)
        clauses.append(tuple(Literal(v, rng.random() < 0.5) for v in variables))
    return CnfFormula(n_vars, tuple(clauses))


def _verify_sat(args):
    rng = random.Random(args.seed)
    for trial in range(args.trials):
        formula = _random_formula(rng)
        poly = violation_polynomial(formula)
        if poly.total_degree > 3:
            return False, {"trial": trial, "reason": "degree > 3",
                           "degree": poly.total_degree}
        best, _ = brute_force_max(poly, formula.n_vars)
        satisfiable, _ = brute_force_sat(formula)
        if (best == 0) != satisfiable:
            return False, {"trial": trial, "reason": "max/sat mismatch",
                           "max": format_rational(best), "sat": satisfiable}
        probe = rng.randrange(1 << formula.n_vars)
        bits = tuple((probe >> i) & 1 for i in range(formula.n_vars))
        if poly.eval(bits) != -violated_clause_count(formula, bits):
            return False, {"trial": trial, "reason": "per-vertex law violated",
                           "vertex": list(bits)}
    return True, None


VERIFY_HANDLERS = {
    "uniqueness": (_verify_uniqueness, "run"),
    "gradient": (_verify_gradient, "run"),
    "path": (_verify_path, "run"),
    "constancy": (_verify_constancy, "run"),
    "equivalence": (_verify_equivalence, "run"),
    "uso": (_verify_uso, "face-scan"),
    "sink": (_verify_sink, "run"),
    "sat": (_verify_sat, "sat"),
}

VERIFY_DEFAULT_N = {
    "uniqueness": 10, "gradient": 8, "path": 10, "constancy": 8,
    "equivalence": 8, "uso": 8, "sink": 10, "sat": 12,
}


def cmd_verify(args) -> int:
    handler, cap_kind = VERIFY_HANDLERS[args.check]
    if args.n is None:
        args.n = VERIFY_DEFAULT_N[args.check]
    _check_cap(args.n, cap_kind, f"'{args.check}'")
    try:
        ok, witness = handler(args)
    except PivotforgeError as exc:
        ok, witness = False, {"error": type(exc).__name__, "message": str(exc)}
    if ok:
        extra = f" trials={args.trials} seed={args.seed}" if args.check in (
            "equivalence", "sat") else ""
        print(f"check={args.check} n={args.n}{extra} result=pass")
        return 0
    _print_witness(args.check, witness)
    return 1


# ------------------------------------------------------------- export --


def cmd_export(args) -> int:
    n = args.n
    if args.what == "polynomial":
        _check_cap(n, "run", "expansion")
        poly = expand(n)
        out = args.out or f"polynomial_n{n}.json"
        _write_text(out, _json_text(poly.to_json_dict()))
        print(f"degree={poly.total_degree} terms={len(poly.terms)} file={out}")
    elif args.what == "orientation":
        _check_cap(n, "face-scan", "orientation")
        orientation = induce_orientation(LowerBoundPolynomial(n), n)
        out = args.out or f"orientation_n{n}.json"
        _write_text(out, _json_text(orientation.to_json_dict()))
        print(f"n={n} edges={n * (1 << (n - 1))} file={out}")
    else:
        _check_cap(n, "run", "path")
        path = hamiltonian_path(n)
        out = args.out or f"path_n{n}.json"
        _write_text(out, _json_text(path.to_json_dict()))
        print(f"n={n} length={len(path.vertex_ids)} file={out}")
    return 0


# ------------------------------------------------------------- reduce --


def cmd_reduce(args) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    try:
        formula = parse_dimacs(text)
    except DimacsParseError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 2
    poly = violation_polynomial(formula)
    out = args.out or (os.path.splitext(args.input)[0] + ".poly.json")
    _write_text(out, _json_text(poly.to_json_dict()))
    print(f"nvars={formula.n_vars} clauses={len(formula.clauses)} "
          f"degree={poly.total_degree} file={out}")
    if args.check:
        if formula.n_vars > _cap("sat"):
            raise _usage_error(f"n={formula.n_vars} exceeds the SAT enumeration cap")
        best, _ = brute_force_max(poly, formula.n_vars)
        satisfiable, witness = brute_force_sat(formula)
        verdict = "SAT" if satisfiable else "UNSAT"
        print(f"verdict={verdict} max={format_rational(best)}")
        if (best == 0) != satisfiable:
            _print_witness("reduce", {
                "reason": "reduction disagrees with truth-table check",
                "max": format_rational(best), "sat": satisfiable,
            })
            return 1
    return 0


# --------------------------------------------------------------- main --


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pivotforge",
        description="Exact active-set/simplex runs on box programs and "
                    "brute-force certification of their worst-case instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser(
        "run",
        help="run the active-set method on the lower-bound objective",
        description="Runs the active-set method from the origin on the "
                    "n-dimensional lower-bound objective (optionally padded "
                    "into a larger cube) and writes the full trajectory.",
    )
    run.add_argument("--n", type=int, required=True, help="objective dimension")
    run.add_argument("--rule", choices=RULE_NAMES, default="lowest-index")
    run.add_argument("--seed", type=int, default=0,
                     help="seed for the 'random' rule")
    run.add_argument("--pad-to", type=int, default=None, metavar="N",
                     help="embed the objective in an N-dimensional cube")
    run.add_argument("--max-iter", type=int, default=None)
    run.add_argument("--format", choices=("json", "csv"), default="json",
                     help="trajectory JSON or one-row summary CSV")
    run.add_argument("--out", default=None, help="output path")
    run.add_argument("--approx", action="store_true",
                     help="add lossy decimal fields next to exact p/q values")
    run.set_defaults(func=cmd_run)

    claims = "\n".join(f"  {name}: {text}" for name, text in CHECK_CLAIMS.items())
    verify = sub.add_parser(
        "verify",
        help="run one certification check (exit 0 pass, 1 fail with witness)",
        description="Each check certifies one property:\n" + claims,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    verify.add_argument("check", choices=sorted(CHECK_CLAIMS))
    verify.add_argument("--n", type=int, default=None,
                        help="dimension (default depends on the check)")
    verify.add_argument("--trials", type=int, default=100,
                        help="trial count for randomized checks")
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(func=cmd_verify)

    export = sub.add_parser(
        "export",
        help="write polynomial/orientation/path artifacts as JSON",
    )
    export.add_argument("what", choices=("polynomial", "orientation", "path"))
    export.add_argument("--n", type=int, required=True)
    export.add_argument("--out", default=None)
    export.set_defaults(func=cmd_export)

    reduce_cmd = sub.add_parser(
        "reduce",
        help="convert a DIMACS CNF file to its clause-penalty polynomial",
    )
    reduce_cmd.add_argument("input", help="DIMACS CNF file")
    reduce_cmd.add_argument("--check", action="store_true",
                            help="also run the brute-force SAT/max oracles "
                                 "and require agreement")
    reduce_cmd.add_argument("--out", default=None)
    reduce_cmd.set_defaults(func=cmd_reduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
