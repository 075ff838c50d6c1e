import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rankx.algebra import field_make, is_prime
from rankx.hitting import (EmptySupport, HittingFamily, RankOneDet, build_U, build_hitting_family,
                           circulation, estimate_hit_fraction, evaluation_set, is_isolating,
                           isolation_implies_nonzero_check, monomial_support, random_rank_one_det, supp,
                           weight_of_index, wilson_radius)

BIG_PRIME = field_make(2_097_169)  # first prime above 2^21


def small_family(F, N=3, t=2, p=17):
    return HittingFamily(F, N, 0.5, 1, t, Fraction(1, 8), p, 1, evaluation_set(F, 10))


def test_supp_examples():
    F = field_make(7)
    I = np.array([[1, 0, 0, 0], [0, 1, 0, 0]])
    assert supp(RankOneDet(F, I, I)) == {(0, 1)}
    rng = np.random.default_rng(0)
    U = rng.integers(1, 7, size=(2, 5))
    U[:, 2] = 0
    assert all(2 not in S for S in supp(RankOneDet(F, U, rng.integers(1, 7, size=(2, 5)))))


@pytest.mark.parametrize("p,N,r", [(101, 6, 2), (2, 7, 3), (3, 8, 3), (5, 6, 1)])
def test_supp_matches_monomial_expansion(p, N, r):
    F = field_make(p)
    rng = np.random.default_rng(p + N)
    for _ in range(8):
        A = random_rank_one_det(F, r, N, rng)
        mono = monomial_support(A)
        assert set(mono) == supp(A)


def test_build_U_examples():
    p, u = build_U(2, 4, 0.5)
    assert p == 17
    assert list(u(0)) == [0, 0] and list(u(1)) == [1, 1]
    assert list(u(3)) == [3, 9]
    with pytest.raises(IndexError):
        u(17)
    with pytest.raises(ValueError):
        build_U(2, 4, 1.0)


@given(st.integers(1, 12), st.integers(1, 50), st.fractions(Fraction(1, 100), Fraction(99, 100)))
def test_build_U_prime_in_bertrand_interval(N, s, eps):
    p, u = build_U(N, s, eps)
    lo = Fraction(s * N) / eps
    assert is_prime(p) and lo <= p < 2 * lo
    assert int(u(p - 1).max()) < p


def test_circulation_examples():
    u = [1, 2, 3, 4]
    assert circulation(u, [0, 1, 2, 3]) == 2
    assert circulation([5] * 6, [0, 3, 1, 5]) == 0
    assert circulation([7, 7, 2, 2], [0, 1, 2, 3]) == 0
    with pytest.raises(ValueError):
        circulation(u, [0, 1, 2])
    with pytest.raises(ValueError):
        circulation(u, [0, 0])
    with pytest.raises(ValueError):
        circulation(u, [0, 9])


def test_weight_examples():
    fam = small_family(field_make(101))
    w = weight_of_index(fam, (2, 3))
    assert w.tolist() == [[2, 3], [4, 9], [8, 10]]
    assert (weight_of_index(fam, (1, 1)) == 1).all()
    assert (weight_of_index(fam, (0, 0)) == 0).all()
    with pytest.raises(IndexError):
        weight_of_index(fam, (17, 0))


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_weight_coordinates_below_p(a, b):
    fam = small_family(field_make(101), N=5, p=97)
    w = weight_of_index(fam, (a % 97, b % 97))
    assert (0 <= w).all() and (w < 97).all()


def test_point_examples():
    F = field_make(101)
    fam = small_family(F)
    assert (fam.point((5, 6), (1, 1)) == 1).all()
    assert (fam.point((0, 0), (7, 9)) == 1).all()
    g = 2
    a = fam.point((2, 3), (g, g * g))
    assert [int(x) for x in a] == [pow(g, e, 101) for e in (2 + 6, 4 + 18, 8 + 20)]
    with pytest.raises(IndexError):
        fam.point((2, 3), (101, 1))


def test_family_parameters():
    fam = build_hitting_family(BIG_PRIME, 6, 0.5)
    assert fam.t == 3 and fam.s == 6**4 and fam.epsilon == Fraction(1, 12)
    lo = fam.s * 6 * 12
    assert is_prime(fam.p) and lo <= fam.p < 2 * lo
    assert fam.S_required == math.ceil(8 * 6**6 * 9 / 0.25)
    assert fam.undersized and not fam.reduced
    assert len(fam.S) == BIG_PRIME.q
    assert build_hitting_family(BIG_PRIME, 1, 0.5).t == 1
    with pytest.raises(ValueError):
        build_hitting_family(BIG_PRIME, 4, 0.0)
    S = evaluation_set(field_make(5), 5)
    assert S.tolist() == [1, 2, 3, 4, 0]


def test_isolation_examples():
    F = field_make(7)
    I = np.array([[1, 0, 0], [0, 1, 0]])
    single = RankOneDet(F, I, I)
    assert is_isolating(np.zeros((3, 2)), single).isolating
    rng = np.random.default_rng(4)
    A = random_rank_one_det(F, 2, 5, rng)
    assert len(supp(A)) >= 2
    res = is_isolating(np.zeros((5, 1)), A)
    assert not res.isolating and len(res.argmax) == len(supp(A))
    with pytest.raises(EmptySupport):
        is_isolating(np.zeros((3, 1)), RankOneDet(F, np.zeros((2, 3)), np.zeros((2, 3))))


def test_cancelling_pair_needs_isolation():
    F = field_make(7)
    # det(A(x)) = x_0 - x_1: two supports with opposite coefficients
    A = RankOneDet(F, np.array([[1, 1]]), np.array([[1, 6]]))
    chk = isolation_implies_nonzero_check(np.zeros((2, 1)), A)
    assert chk.holds is None and not chk.isolating and chk.top_sum == 0
    chk = isolation_implies_nonzero_check(np.array([[1], [0]]), A)
    assert chk.holds is True
    empty = isolation_implies_nonzero_check(np.zeros((2, 1)), RankOneDet(F, np.zeros((1, 2)), np.zeros((1, 2))))
    assert empty.holds is None and "empty" in empty.status


def test_isolating_weights_certify_nonzero_sweep():
    F = field_make(31)
    fam = small_family(F, N=6, t=3, p=37)
    rng = np.random.default_rng(9)
    pyrng = random.Random(9)
    isolating = 0
    for _ in range(500):
        A = random_rank_one_det(F, int(rng.integers(1, 4)), 6, rng)
        if not supp(A):
            continue
        w = fam.weights(fam.random_index(pyrng)[0])
        chk = isolation_implies_nonzero_check(w, A)
        if chk.isolating:
            isolating += 1
            assert chk.holds is True
    assert isolating > 300


def test_isolating_fraction_meets_target():
    fam = build_hitting_family(BIG_PRIME, 6, 0.5)
    rng = np.random.default_rng(2)
    pyrng = random.Random(2)
    target = float((1 - fam.epsilon) ** fam.t) - 0.1
    for _ in range(5):
        A = random_rank_one_det(BIG_PRIME, 2, 6, rng)
        frac = np.mean([is_isolating(fam.weights(fam.random_index(pyrng)[0]), A).isolating for _ in range(200)])
        assert frac >= target


def _even_cycles(edges):
    """All simple cycles of a bipartite multigraph as edge-index sequences (one orientation each)."""
    adj = {}
    for e, (a, b) in enumerate(edges):
        adj.setdefault(("L", a), []).append((e, ("R", b)))
        adj.setdefault(("R", b), []).append((e, ("L", a)))
    seen, out = set(), []

    def walk(start, v, used, path):
        for e, w in adj[v]:
            if e in used:
                continue
            if w == start and len(path) >= 1:
                cyc = path + [e]
                key = frozenset(cyc)
                if key not in seen:
                    seen.add(key)
                    out.append(cyc)
            elif w != start and all(w != x for x in visited):
                visited.append(w)
                walk(start, w, used | {e}, path + [e])
                visited.pop()

    for v in adj:
        visited = [v]
        walk(v, v, frozenset(), [])
    return [c for c in out if len(c) % 2 == 0]


def test_circulation_weights_avoid_zero():
    """Reduced s: all chosen circulations are nonzero for at least a 1 - eps fraction of a."""
    N, s, eps = 8, 4, Fraction(1, 4)
    p, u = build_U(N, s, eps)
    U = np.stack([u(a) for a in range(p)])
    rng = random.Random(1)
    graphs = 0
    while graphs < 100:
        m = rng.randint(4, N)
        edges = [(rng.randrange(3), rng.randrange(3)) for _ in range(m)]
        cycles = _even_cycles(edges)
        if not cycles:
            continue
        graphs += 1
        chosen = rng.sample(cycles, min(s, len(cycles)))
        good = sum(all(circulation(U[a], c) != 0 for c in chosen) for a in range(p))
        assert good >= (1 - eps) * p


def test_wilson_radius():
    assert wilson_radius(50, 100) == pytest.approx(0.09617, abs=1e-5)
    assert wilson_radius(0, 10) > 0
    with pytest.raises(ValueError):
        wilson_radius(0, 0)


def test_hit_estimates():
    F = BIG_PRIME
    fam = build_hitting_family(F, 6, 0.5)
    I = np.zeros((2, 6), dtype=np.int64)
    I[0, 0] = I[1, 1] = 1
    single = RankOneDet(F, I, I)
    est = estimate_hit_fraction(single, fam, 100, seed=0)
    assert est.fraction > 0.95
    with pytest.raises(ValueError):
        estimate_hit_fraction(single, fam, 0, seed=0)
    with pytest.raises(EmptySupport):
        estimate_hit_fraction(RankOneDet(F, np.zeros((2, 6)), np.zeros((2, 6))), fam, 5, seed=0)
    A = random_rank_one_det(F, 2, 6, np.random.default_rng(8))
    est = estimate_hit_fraction(A, fam, 300, seed=1)
    assert est.fraction >= 0.5 - est.radius
    again = estimate_hit_fraction(A, fam, 300, seed=1)
    assert again.hits == est.hits


def test_points_reproducible_from_descriptor():
    fam = build_hitting_family(BIG_PRIME, 4, 0.5)
    d = fam.descriptor()
    assert {"N", "t", "delta", "epsilon", "p", "S_size"} <= set(d)
    clone = build_hitting_family(BIG_PRIME, d["N"], d["delta"])
    idx = fam.random_index(random.Random(0))
    assert np.array_equal(fam.point(*idx), clone.point(*idx))
    pts = fam.sample_points(7, seed=3)
    assert pts.shape == (7, 4) and np.array_equal(pts, fam.sample_points(7, seed=3))
