import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import constant_term_brute, constant_term_tuples
from qperiods import kernels
from qperiods.errors import (DimensionMismatch, DivisibilityFailure, NotUnimodular,
                             ParseError, QPeriodsError)
from qperiods.laurent import (LaurentPoly, MutationSpec, apply_unimodular,
                              classical_period_series, constant_term, determinant,
                              divide_exact, format_poly, mutate, parse, period,
                              period_numeric)

CP2 = "x + y + x^-1*y^-1"


def polys(dim, max_terms=5, lo=-2, hi=2, coeff=4):
    exps = st.tuples(*[st.integers(lo, hi)] * dim)
    return st.dictionaries(exps, st.integers(-coeff, coeff), max_size=max_terms).map(
        lambda t: LaurentPoly(dim, t))


# parsing and formatting

def test_parse_toric_example():
    W = parse("x1 + x2 + x1^-1*x2^-1", 2)
    assert W.terms == {(1, 0): 1, (0, 1): 1, (-1, -1): 1}


def test_parse_zero_and_aliases():
    assert parse("0", 3).is_zero() and parse("0", 3).dim == 3
    assert parse(CP2) == parse("x1 + x2 + x1^-1*x2^-1")
    assert parse("z").dim == 3


def test_parse_coefficients():
    W = parse("2*x1^3*x2^-2 - x1", 2)
    assert W.terms == {(3, -2): 2, (1, 0): -1}
    assert parse("5 + x1", 1).constant_term() == 5
    assert parse("-x + x", 1).is_zero()


@pytest.mark.parametrize("text,pos", [("x + ", 4), ("x1 ** 2", 4), ("x1 + 2y", 6), ("x1 $", 3)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text, 2)
    assert info.value.position == pos


def test_parse_index_out_of_range():
    with pytest.raises(ParseError):
        parse("x3", 2)


@given(polys(3, coeff=9, lo=-3, hi=3))
def test_format_parse_round_trip(W):
    text = format_poly(W)
    assert parse(text, 3) == W
    assert format_poly(parse(text, 3)) == text


def test_format_samples():
    assert format_poly(parse("x^-1 - 2*y", 2)) == "x1^-1 - 2*x2"
    assert format_poly(LaurentPoly(2)) == "0"
    assert format_poly(parse("-3", 1)) == "-3"


# ring structure

@settings(max_examples=60)
@given(polys(2), polys(2), polys(2))
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly(2)


def test_binomial_square():
    assert parse("x1 + x2") ** 2 == parse("x1^2 + 2*x1*x2 + x2^2")
    assert parse(CP2) * 0 == LaurentPoly(2)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        parse("x", 1) + parse("x", 2)


def test_constant_term():
    assert constant_term(parse(CP2)) == 0
    assert constant_term(parse("5 + x1")) == 5
    assert constant_term(parse(CP2) ** 3) == 6


# periods

def test_period_golden():
    W = parse(CP2)
    assert period(W, 3) == 6
    assert period(W, 2) == 0
    assert period(W, 0) == 1
    assert all(period(parse("x1 + x2"), d) == 0 for d in range(1, 11))


@pytest.mark.parametrize("r", range(1, 7))
def test_period_cp1_binomial(r):
    W = parse("x + x^-1")
    assert period(W, 2 * r) == math.comb(2 * r, r) == constant_term_tuples(W.terms, 2 * r)


@settings(max_examples=80, deadline=None)
@given(polys(3, coeff=3), st.integers(0, 6))
def test_period_matches_full_expansion(W, d):
    if W.is_zero():
        assert period(W, d) == (1 if d == 0 else 0)
        return
    assert period(W, d) == constant_term_brute(W.terms, d)


@pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="compiled kernel not built")
@settings(max_examples=80, deadline=None)
@given(polys(3, coeff=20), st.integers(0, 8))
def test_backends_agree(W, d):
    assert period(W, d, backend="compiled") == period(W, d, backend="python")


@pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="compiled kernel not built")
def test_compiled_overflow_falls_back():
    W = LaurentPoly(1, {(1,): 2**40, (-1,): 3**25})
    exact = constant_term_brute(W.terms, 6)
    assert abs(exact) > 2**63
    assert period(W, 6, backend="compiled") == exact


def test_period_numeric():
    assert abs(period_numeric(parse(CP2), 3, 64) - 6) < 1e-6
    assert period_numeric(parse(CP2), 0, 8) == 1.0
    assert abs(period_numeric(parse("x1 + x2"), 4, 32)) < 1e-9
    with pytest.raises(QPeriodsError):
        period_numeric(parse(CP2), 3, 1)


def test_period_numeric_overflow():
    W = LaurentPoly(1, {(1,): 10**200, (-1,): 10**200})
    with pytest.raises(OverflowError):
        period_numeric(W, 4, 16)


def test_classical_series():
    s = classical_period_series(parse(CP2), 6)
    phi6 = constant_term_brute(parse(CP2).terms, 6)
    assert phi6 == 90
    assert list(s.coeffs) == [1, 0, 0, 1, 0, 0, Fraction(phi6, math.factorial(6))]
    assert s[6] == Fraction(1, 8)
    z = classical_period_series(LaurentPoly(2), 4)
    assert list(z.coeffs) == [1, 0, 0, 0, 0]


def test_series_multiplicative_on_disjoint_variables():
    W1 = parse("x1 + x1^-1 + 2*x1^2", 2)
    W2 = parse("x2 - x2^-1", 2)
    top = 8
    joint = classical_period_series(W1 + W2, top)
    assert joint == classical_period_series(W1, top) * classical_period_series(W2, top)
    # binomial convolution checked against the full expansion
    for d in range(top + 1):
        conv = sum(math.comb(d, a) * constant_term_brute(W1.terms, a) * constant_term_brute(W2.terms, d - a)
                   for a in range(d + 1))
        assert period(W1 + W2, d) == conv


# unimodular changes and mutations

def test_determinant():
    assert determinant([[2, 1], [1, 1]]) == 1
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3


def test_apply_unimodular():
    assert apply_unimodular(parse("x1 + x2"), [[0, 1], [1, 0]]) == parse("x1 + x2")
    assert apply_unimodular(parse("x1", 2), [[1, 0], [1, 1]]) == parse("x1*x2")
    with pytest.raises(NotUnimodular):
        apply_unimodular(parse(CP2), [[2, 0], [0, 1]])


def test_unimodular_invariance_random():
    rng = random.Random(5)
    W = parse("x + y + x^-1*y^-1 + 2*x*y^-1")
    for _ in range(20):
        g = [[1, 0], [0, 1]]
        for _ in range(4):
            a, b = rng.sample(range(2), 2)
            k = rng.choice([-1, 1])
            g[a] = [x + k * y for x, y in zip(g[a], g[b])]
        V = apply_unimodular(W, g)
        assert [period(V, d) for d in range(8)] == [period(W, d) for d in range(8)]


def test_mutation_example():
    W = parse("x + y + y^-1 + x*y^-1")
    out = mutate(W, MutationSpec(2, parse("1 + x", 2)))
    assert out == parse("x + y + x*y + y^-1")
    assert period(W, 2) == period(out, 2) == 2
    assert constant_term_brute(out.terms, 2) == 2


def test_mutation_identity_factor():
    W = parse("x + y + y^-1 + x*y^-1")
    assert mutate(W, MutationSpec(2, LaurentPoly.constant(2, 1))) == W


def test_mutation_divisibility_failure():
    with pytest.raises(DivisibilityFailure) as info:
        mutate(parse(CP2), MutationSpec(2, parse("1 + x", 2)))
    assert info.value.j == -1


def test_mutation_spec_validation():
    with pytest.raises(QPeriodsError):
        MutationSpec(2, parse("1 + y", 2))
    with pytest.raises(QPeriodsError):
        MutationSpec(3, parse("1 + x", 2))


def test_divide_exact():
    f = parse("1 + x + y^-1", 2)
    g = parse("x^-2*y + 3 - y", 2)
    assert divide_exact(f * g, f) == g
    assert divide_exact(parse("x", 2) + 1, parse("x", 2) - 1) is None
