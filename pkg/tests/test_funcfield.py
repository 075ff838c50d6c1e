import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rankx.funcfield import (GapOrder, UnknownPlace, ff_arith, hermitian_function_field,
                             rational_function_field, semigroup_gaps)

INSTANCES = [rational_function_field(5), rational_function_field(4), hermitian_function_field(2),
             hermitian_function_field(3)]
IDS = ["Q5", "Q4", "H2", "H3"]


def random_element(FF, rng, terms=4, max_deg=6):
    m = {}
    for _ in range(rng.randint(1, terms)):
        b = rng.randrange(FF.ell) if FF.kind == "hermitian" else 0
        m[(rng.randrange(max_deg), b)] = rng.randrange(1, FF.q)
    return FF.element(m)


def test_hermitian_reduction_rule():
    H = ff_arith
    FF = hermitian_function_field(2)
    y = FF.monomial(0, 1)
    assert H(FF, "mul", y, y) == FF.element({(3, 0): 1, (0, 1): 1})
    assert H(FF, "add", y, FF.element({})) == y
    R = rational_function_field(5)
    x = R.monomial(1)
    assert R.mul(x, x) == R.monomial(2)


def test_valuation_examples():
    R = rational_function_field(5)
    H = hermitian_function_field(2)
    assert R.valuation(R.one()) == 0
    assert R.valuation(R.monomial(3)) == -3
    assert H.valuation(H.monomial(1, 1)) == -5
    assert R.valuation(R.element({})) == float("inf")


def test_evaluation_examples():
    R = rational_function_field(5)
    assert R.evaluate(R.monomial(2), 3) == 4
    assert R.evaluate(R.element({0: 3}), 1) == 3
    H = hermitian_function_field(2)
    F = H.base
    z = F.from_coeffs([0, 1])
    assert F.add(F.mul(z, z), z) == 1
    assert H.evaluate(H.monomial(0, 1), (1, z)) == z
    with pytest.raises(UnknownPlace):
        H.evaluate(H.monomial(0, 1), (1, 1))


def test_pole_order_functions():
    H = hermitian_function_field(2)
    assert H.pole_order_function(0) == H.one()
    assert H.pole_order_function(3) == H.monomial(0, 1)
    with pytest.raises(GapOrder):
        H.pole_order_function(1)


def test_pole_order_chains():
    R = rational_function_field(7)
    chain = R.pole_order_chain(3)
    assert [R.valuation(f) for f in chain] == [0, -1, -2]
    H = hermitian_function_field(2)
    assert H.pole_order_chain(4) == [H.one(), H.monomial(1), H.monomial(0, 1), H.monomial(2)]
    assert H.pole_order_chain(1) == [H.one()]


@pytest.mark.parametrize("FF", INSTANCES, ids=IDS)
def test_chain_valuations_strictly_decrease_within_bound(FF):
    n = 12
    vals = [FF.valuation(f) for f in FF.pole_order_chain(n)]
    assert vals[0] == 0 and all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] >= -(n - 1 + FF.genus)


@pytest.mark.parametrize("ell,gaps", [(2, [1]), (3, [1, 2, 5])])
def test_semigroup_gaps_examples(ell, gaps):
    assert semigroup_gaps(ell) == gaps


@pytest.mark.parametrize("ell", [2, 3, 4, 5])
def test_gap_count_is_genus(ell):
    assert len(semigroup_gaps(ell)) == ell * (ell - 1) // 2


def test_place_counts():
    assert len(rational_function_field(3).places) == 3
    for ell in (2, 3, 4):
        FF = hermitian_function_field(ell)
        pts = FF.places
        assert len(pts) == ell**3
        F = FF.base
        for a, b in pts:
            assert F.add(F.pow(b, ell), b) == F.pow(a, ell + 1)


@pytest.mark.parametrize("FF", INSTANCES, ids=IDS)
def test_exact_valuation_for_every_pole_number(FF):
    g = FF.genus
    for d in range(4 * g + 21):
        if FF.is_pole_number(d):
            assert FF.valuation(FF.pole_order_function(d)) == -d
        else:
            with pytest.raises(GapOrder):
                FF.pole_order_function(d)


@pytest.mark.parametrize("FF", INSTANCES, ids=IDS)
def test_valuation_laws(FF):
    rng = random.Random(11)
    for _ in range(1000):
        f, g = random_element(FF, rng), random_element(FF, rng)
        vf, vg = FF.valuation(f), FF.valuation(g)
        s = FF.add(f, g)
        assert FF.valuation(s) >= min(vf, vg)
        if vf != vg:
            assert FF.valuation(s) == min(vf, vg)
        assert FF.valuation(FF.mul(f, g)) == vf + vg


@pytest.mark.parametrize("FF", INSTANCES, ids=IDS)
def test_evaluation_is_a_ring_homomorphism(FF):
    rng = random.Random(3)
    F = FF.base
    for _ in range(100):
        f, g = random_element(FF, rng), random_element(FF, rng)
        ef, eg = FF.evaluate_all(f), FF.evaluate_all(g)
        assert np.array_equal(FF.evaluate_all(FF.mul(f, g)), F.mul(ef, eg))
        assert np.array_equal(FF.evaluate_all(FF.add(f, g)), F.add(ef, eg))


@given(st.integers(0, 40), st.integers(0, 1), st.integers(0, 40), st.integers(0, 1))
def test_hermitian_products_stay_reduced(a1, b1, a2, b2):
    FF = hermitian_function_field(2)
    prod = FF.mul(FF.monomial(a1, b1), FF.monomial(a2, b2))
    assert all(b < 2 for (_, b), _ in prod.terms)
