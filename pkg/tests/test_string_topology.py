import itertools
import random

import pytest

from oracles import ext_mul_word, perm_sign
from qperiods.errors import DimensionMismatch
from qperiods.string_topology import (ExtElement, LoopClass, bracket, bv, cs_product,
                                      goldman_t2, interior_product, wedge)

E12 = ExtElement(2, {(1, 2): 1})


def e(n, *idx):
    return ExtElement(n, {tuple(idx): 1})


def rand_ext(rng, n, p=None):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        q = rng.randint(0, n) if p is None else p
        terms[tuple(sorted(rng.sample(range(1, n + 1), q)))] = rng.choice([-2, -1, 1, 3])
    return ExtElement(n, terms)


def rand_loop(rng, n, p):
    subsets = list(itertools.combinations(range(1, n + 1), p))
    return LoopClass(n, {(rng.choice(subsets), tuple(rng.randint(-3, 3) for _ in range(n))):
                         rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(rng.randint(1, 4))})


# exterior algebra

def test_wedge_basics():
    assert wedge(e(2, 1), e(2, 1)).is_zero()
    assert wedge(e(2, 1), e(2, 2)) == E12
    assert wedge(e(2, 2), e(2, 1)) == -E12
    assert wedge(e(2, 1) + e(2, 2), e(2, 2)) == E12
    with pytest.raises(DimensionMismatch):
        wedge(e(2, 1), e(3, 1))


def test_wedge_signs_against_permutation_parity():
    n = 5
    for p in range(n + 1):
        for a in itertools.combinations(range(1, n + 1), p):
            for b in itertools.combinations(range(1, n + 1), 2):
                sign, subset = ext_mul_word(a + b)
                got = wedge(ExtElement(n, {a: 1}), ExtElement(n, {b: 1}))
                assert got == ExtElement(n, {subset: sign} if sign else {})


def test_basis_constructor_orders_factors():
    assert ExtElement.basis(3, 3, 1) == ExtElement(3, {(1, 3): -1})
    assert ExtElement.basis(3, 2, 3, 1) == ExtElement(3, {(1, 2, 3): perm_sign((2, 3, 1))})


def test_interior_product():
    assert interior_product((1, 0), E12) == e(2, 2)
    assert interior_product((0, 1), E12) == -e(2, 1)
    assert interior_product((4, 5), ExtElement.one(2)).is_zero()
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, 4)
        u = [rng.randint(-3, 3) for _ in range(n)]
        a = rand_ext(rng, n)
        assert interior_product(u, interior_product(u, a)).is_zero()


def test_interior_product_is_antiderivation():
    rng = random.Random(12)
    for _ in range(200):
        n = rng.randint(1, 4)
        u = [rng.randint(-3, 3) for _ in range(n)]
        p = rng.randint(0, n)
        a, b = rand_ext(rng, n, p), rand_ext(rng, n)
        lhs = interior_product(u, wedge(a, b))
        rhs = wedge(interior_product(u, a), b) + wedge(a, interior_product(u, b)).scale((-1) ** p)
        assert lhs == rhs


def test_skew_pairing_convention():
    assert E12.pair((1, 0), (0, 1)) == 1
    assert E12.pair((0, 1), (1, 0)) == -1
    assert (-E12).pair((0, 1), (-2, 5)) == -2


# loop classes

def test_product_examples():
    u, v = (1, 2), (-3, 1)
    assert cs_product(LoopClass.group_element(u), LoopClass.group_element(v)) == LoopClass.group_element((-2, 3))
    x = LoopClass.tensor(e(2, 1), u)
    y = LoopClass.tensor(e(2, 1), v)
    assert cs_product(x, y).is_zero()


def test_bv_examples():
    assert bv(LoopClass.tensor(E12, (1, 0))) == LoopClass.tensor(e(2, 2), (1, 0))
    assert bv(LoopClass.group_element((2, 3))).is_zero()


def test_bracket_of_bv_image_sample():
    x = bv(LoopClass.tensor(E12, (1, 0)))
    assert bracket(x, LoopClass.group_element((0, 1))) == LoopClass.group_element((1, 1))
    y = bv(LoopClass.tensor(E12, (2, -1)))
    assert bracket(y, LoopClass.group_element((2, -1))).is_zero()


def test_bv_axioms_random():
    rng = random.Random(13)
    for _ in range(150):
        n = rng.randint(1, 4)
        a, b, c = (rng.randint(0, n) for _ in range(3))
        x, y, z = rand_loop(rng, n, a), rand_loop(rng, n, b), rand_loop(rng, n, c)
        assert bv(bv(x)).is_zero()
        assert cs_product(x, y) == cs_product(y, x).scale((-1) ** (a * b))
        assert bracket(x, y) == bracket(y, x).scale((-1) ** (a * b))
        assert bracket(x, cs_product(y, z)) == (
            cs_product(bracket(x, y), z) + cs_product(y, bracket(x, z)).scale((-1) ** ((a - 1) * b)))
        assert bracket(x, bracket(y, z)) == (
            bracket(bracket(x, y), z).scale((-1) ** (a - 1))
            + bracket(y, bracket(x, z)).scale((-1) ** ((a - 1) * (b - 1))))


def test_bracket_lowers_degree_by_one():
    rng = random.Random(14)
    for _ in range(50):
        n = rng.randint(2, 4)
        a, b = rng.randint(0, n), rng.randint(0, n)
        r = bracket(rand_loop(rng, n, a), rand_loop(rng, n, b))
        assert r.is_zero() or r.degrees() == {a + b - 1}


def test_bracket_on_mixed_degrees_is_bilinear():
    rng = random.Random(15)
    n = 3
    x1, x2, y = rand_loop(rng, n, 1), rand_loop(rng, n, 2), rand_loop(rng, n, 2)
    assert bracket(x1 + x2, y) == bracket(x1, y) + bracket(x2, y)


def test_goldman_examples():
    assert goldman_t2((1, 0), (0, 1)) == LoopClass.group_element((1, 1))
    assert goldman_t2((2, 3), (2, 3)).is_zero()
    assert goldman_t2((1, 1), (1, -1)) == LoopClass.group_element((2, 0), -2)
    with pytest.raises(DimensionMismatch):
        goldman_t2((1, 0, 0), (0, 1, 0))


def test_bv_image_bracket_and_goldman_exhaustive_small():
    rng = range(-1, 2)
    for u in itertools.product(rng, repeat=2):
        for v in itertools.product(rng, repeat=2):
            lhs = bracket(bv(LoopClass.tensor(E12, u)), LoopClass.group_element(v))
            assert lhs == goldman_t2(u, v)


def test_loop_json_round_trip():
    x = LoopClass(3, {((1, 3), (1, -2, 0)): 4, ((), (0, 0, 1)): -1})
    assert LoopClass.from_json(x.to_json()) == x
    assert str(x) == "-x^(0,0,1) + 4*e13*x^(1,-2,0)"
