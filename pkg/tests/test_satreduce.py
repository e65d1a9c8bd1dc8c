import random
from fractions import Fraction

import pytest

from pivotforge import (
    CnfFormula,
    DimacsParseError,
    Literal,
    MultiPoly,
    TooLargeError,
    brute_force_max,
    brute_force_sat,
    multi_eval,
    parse_dimacs,
    violation_polynomial,
)
from pivotforge.satreduce import violated_clause_count


def lit(v):
    return Literal(abs(v), v < 0)


def clause(*vs):
    return tuple(lit(v) for v in vs)


# ------------------------------------------------------------ parser --


def test_parse_basic_formula():
    formula = parse_dimacs("p cnf 3 1\n1 -2 3 0\n")
    assert formula.n_vars == 3
    assert formula.clauses == (clause(1, -2, 3),)


def test_parse_comments_and_contradictions():
    formula = parse_dimacs("c comment\np cnf 1 2\n1 0\n-1 0\n")
    assert formula.n_vars == 1
    assert formula.clauses == (clause(1), clause(-1))


def test_parse_clause_spanning_lines_and_padding():
    formula = parse_dimacs("c x\n\np cnf 4 2\n  1   -2\n3 0\n  4 0\n")
    assert formula.clauses == (clause(1, -2, 3), clause(4,))


def test_parse_errors_carry_positions():
    with pytest.raises(DimacsParseError) as err:
        parse_dimacs("p cnf 2 1\n1 3 0\n")
    assert err.value.line == 2 and err.value.column == 3
    with pytest.raises(DimacsParseError) as err:
        parse_dimacs("p cnf 2 1\n1 -1 0\n")
    assert "repeated" in str(err.value)
    with pytest.raises(DimacsParseError) as err:
        parse_dimacs("p cnf 4 1\n1 2 3 4 0\n")
    assert "more than 3" in str(err.value)
    with pytest.raises(DimacsParseError) as err:
        parse_dimacs("p cnf 2 1\n1 2\n")
    assert "unterminated" in str(err.value)
    with pytest.raises(DimacsParseError) as err:
        parse_dimacs("p cnf 2 1\n0\n")
    assert "empty clause" in str(err.value)
    with pytest.raises(DimacsParseError):
        parse_dimacs("1 0\n")  # clause before header
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 1\np cnf 2 1\n1 0\n")  # duplicate header
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 2\n1 0\n")  # count mismatch
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 1\n1 x 0\n")  # non-integer token
    with pytest.raises(DimacsParseError):
        parse_dimacs("c only a comment\n")  # missing header


def test_formula_invariants_enforced():
    with pytest.raises(ValueError):
        CnfFormula(2, (clause(1, 2, -1),))  # repeated variable
    with pytest.raises(ValueError):
        CnfFormula(2, (clause(3),))  # out of range
    with pytest.raises(ValueError):
        CnfFormula(2, ((),))  # empty clause


# --------------------------------------------------------- reduction --


def x(n, k):
    return MultiPoly.variable(n, k)


def test_reduction_of_a_single_clause():
    formula = CnfFormula(3, (clause(1, -2, 3),))
    poly = violation_polynomial(formula)
    expected = -((1 - x(3, 1)) * x(3, 2) * (1 - x(3, 3)))
    assert poly == expected
    assert poly.total_degree == 3


def test_reduction_of_short_clauses():
    assert violation_polynomial(CnfFormula(1, (clause(1),))) == -(1 - x(1, 1))
    contradiction = CnfFormula(1, (clause(1), clause(-1)))
    assert violation_polynomial(contradiction) == MultiPoly.constant(1, -1)


def test_reduction_degree_never_exceeds_three():
    rng = random.Random(41)
    for _ in range(80):
        formula = _random_formula(rng)
        assert violation_polynomial(formula).total_degree <= 3


# ------------------------------------------------------- brute force --


def test_brute_force_max_examples():
    poly = violation_polynomial(CnfFormula(3, (clause(1, -2, 3),)))
    best, argmax = brute_force_max(poly, 3)
    assert best == 0
    assert multi_eval(poly, argmax) == 0
    best, _ = brute_force_max(
        violation_polynomial(CnfFormula(1, (clause(1), clause(-1)))), 1
    )
    assert best == -1
    assert brute_force_max(MultiPoly.zero(2), 2) == (0, (0, 0))


def test_brute_force_max_matches_full_evaluation():
    rng = random.Random(43)
    for _ in range(40):
        n = rng.randint(1, 5)
        terms = {
            tuple(rng.randint(0, 2) for _ in range(n)):
                Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            for _ in range(rng.randint(1, 6))
        }
        poly = MultiPoly(n, terms)
        best, argmax = brute_force_max(poly, n)
        values = [
            multi_eval(poly, tuple((v >> i) & 1 for i in range(n)))
            for v in range(1 << n)
        ]
        assert best == max(values)
        assert multi_eval(poly, argmax) == best


def test_brute_force_sat_examples():
    satisfiable, witness = brute_force_sat(CnfFormula(3, (clause(1, -2, 3),)))
    assert satisfiable
    assert violated_clause_count(CnfFormula(3, (clause(1, -2, 3),)), witness) == 0
    satisfiable, witness = brute_force_sat(CnfFormula(1, (clause(1), clause(-1))))
    assert not satisfiable and witness is None
    assert brute_force_sat(CnfFormula(2, ())) == (True, (0, 0))


def test_enumeration_guards():
    with pytest.raises(TooLargeError):
        brute_force_max(MultiPoly.zero(25), 25)
    with pytest.raises(TooLargeError):
        brute_force_sat(CnfFormula(25, ()))


# --------------------------------------------------------- soundness --


def _random_formula(rng, max_vars=10, max_clauses=16):
    n_vars = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(0, max_clauses)):
        width = rng.randint(1, min(3, n_vars))
        variables = rng.sample(range(1, n_vars + 1), width)
        clauses.append(tuple(Literal(v, rng.random() < 0.5) for v in variables))
    return CnfFormula(n_vars, tuple(clauses))


def test_reduction_soundness_on_random_formulas():
    rng = random.Random(47)
    for _ in range(120):
        formula = _random_formula(rng)
        poly = violation_polynomial(formula)
        best, _ = brute_force_max(poly, formula.n_vars)
        satisfiable, witness = brute_force_sat(formula)
        assert (best == 0) == satisfiable
        assert best <= 0
        if satisfiable:
            assert multi_eval(poly, witness) == 0


def test_polynomial_counts_violated_clauses_on_every_vertex():
    rng = random.Random(53)
    for _ in range(40):
        formula = _random_formula(rng, max_vars=6)
        poly = violation_polynomial(formula)
        for vid in range(1 << formula.n_vars):
            bits = tuple((vid >> i) & 1 for i in range(formula.n_vars))
            assert multi_eval(poly, bits) == -violated_clause_count(formula, bits)


def test_polynomial_nonpositive_at_interior_points():
    rng = random.Random(59)
    for _ in range(25):
        formula = _random_formula(rng, max_vars=5)
        poly = violation_polynomial(formula)
        for _ in range(12):
            point = tuple(
                Fraction(rng.randint(0, 24), 24) for _ in range(formula.n_vars)
            )
            assert multi_eval(poly, point) <= 0
