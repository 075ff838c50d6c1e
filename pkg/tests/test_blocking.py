import cmath
import itertools
from fractions import Fraction

import numpy as np
import pytest

from rankx.algebra import field_make, matmul, rank
from rankx.algebra.subspaces import enumerate_subspaces
from rankx.blocking import (AffineSubspace, BiasedSet, BlockingSet, affine_cone, bias, biased_exponents,
                            biased_to_blocking, bound_tables, build_biased_set, disperser_to_blocking,
                            expectation_gap, minimum_affine_blocking_size, projective_points,
                            subspace_indicator_l1, trace_to_subfield, verify_affine_blocking,
                            verify_strong_blocking)
from rankx.extract import MatrixFamily, is_disperser, random_family
from rankx.fieldreduce import pipeline_small_field_disperser


def all_vectors(q, k):
    return np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64)


def strong_oracle(B, s):
    """Enumerate Sigma directly by a basis (not via its dual) and test spans."""
    F, k = B.field, B.k
    for M in enumerate_subspaces(F, k, k - s):
        Sig = M.T
        inside = [x for x in B.points if rank(F, np.vstack([Sig, x[None]])) == k - s]
        if not inside or rank(F, np.array(inside)) < k - s:
            return False
    return True


def affine_oracle(B, s):
    """Enumerate every coset of every (k-s)-dimensional subspace as an explicit point set."""
    F, k = B.field, B.k
    pts = {tuple(map(int, x)) for x in B.points}
    for M in enumerate_subspaces(F, k, k - s):
        span = matmul(F, all_vectors(F.q, k - s), M.T)
        for c in all_vectors(F.q, k):
            coset = {tuple(map(int, v)) for v in F.add(span, c[None])}
            if not coset & pts:
                return False
    return True


def bias_oracle(S):
    """Max |mean of omega^{Tr<y,x>}| by a plain Python loop."""
    F = S.field
    best = 0.0
    for y in all_vectors(F.q, S.k)[1:]:
        tot = 0
        for x in S.vectors:
            ip = 0
            for a, b in zip(y, x):
                ip = F.add(ip, F.mul(int(a), int(b)))
            tot += cmath.exp(2j * cmath.pi * int(F.trace(ip)) / F.p)
        best = max(best, abs(tot) / len(S.vectors))
    return best


def test_projective_points_count():
    for q, k in [(2, 3), (3, 3), (4, 2)]:
        assert len(projective_points(field_make(q) if q < 4 else field_make(2, 2), k)) == (q**k - 1) // (q - 1)


def test_normalization_dedups():
    F = field_make(3)
    B = BlockingSet("projective", F, 2, np.array([[2, 2], [1, 1], [0, 2], [0, 0]]))
    assert B.points.tolist() == [[0, 1], [1, 1]]


def test_single_full_rank_member():
    F = field_make(3)
    B = disperser_to_blocking(MatrixFamily(F, 2, 4, np.array([[[1, 0, 0, 0], [0, 1, 0, 0]]])))
    assert len(B) == 4 and B.meta["size_bound"] == 4
    with pytest.raises(ValueError):
        disperser_to_blocking(MatrixFamily(F, 2, 4, np.zeros((1, 2, 4), dtype=np.int64)), s=2)


def test_fano_line_is_not_strong_blocking():
    F = field_make(2)
    line = BlockingSet("projective", F, 3, np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0]]))
    cert = verify_strong_blocking(line, 1)
    assert not cert.holds and not strong_oracle(line, 1)
    cx = cert.counterexample
    assert len(cx["points_in_sigma"]) <= 1 and len(cx["hyperplane_basis"]) == 1


def test_full_space_blocks():
    for q, k in [(2, 4), (3, 3)]:
        F = field_make(q)
        B = BlockingSet("projective", F, k, projective_points(F, k))
        for s in range(1, k):
            assert verify_strong_blocking(B, s).holds
        A = BlockingSet("affine", F, k, all_vectors(q, k))
        for s in range(1, k + 1):
            assert verify_affine_blocking(A, s).holds


def test_origin_misses_a_coset():
    F = field_make(2)
    cert = verify_affine_blocking(BlockingSet("affine", F, 3, np.zeros((1, 3))), 1)
    assert not cert.holds and cert.counterexample["rhs"] == [1]


def test_jamison_minimum():
    size, B = minimum_affine_blocking_size(2, 3)
    assert size == 4 == bound_tables(2, 3, 1).b_jamison
    assert affine_oracle(B, 1)
    allv = all_vectors(2, 3)
    for combo in itertools.combinations(range(8), 3):
        assert not verify_affine_blocking(BlockingSet("affine", field_make(2), 3, allv[list(combo)]), 1).holds


@pytest.mark.parametrize("seed", range(12))
def test_checkers_match_oracles(seed):
    rng = np.random.default_rng(seed)
    q, k = [(2, 4), (3, 3), (2, 3)][seed % 3]
    F = field_make(q)
    n = int(rng.integers(3, q**k))
    pts = rng.integers(0, q, size=(n, k))
    P = BlockingSet("projective", F, k, pts)
    A = BlockingSet("affine", F, k, pts)
    for s in range(1, k):
        assert verify_strong_blocking(P, s).holds == strong_oracle(P, s)
        assert verify_affine_blocking(A, s).holds == affine_oracle(A, s)


def test_bias_examples():
    for q, k in [(2, 3), (3, 2), (4, 2)]:
        F = field_make(2, 2) if q == 4 else field_make(q)
        full = BiasedSet(F, k, all_vectors(q, k))
        assert bias(full, method="direct") == pytest.approx(0, abs=1e-9)
        assert bias(BiasedSet(F, k, np.zeros((1, k)))) == 1
    F2 = field_make(2)
    S = BiasedSet(F2, 2, all_vectors(2, 2)[1:])
    assert bias(S) == Fraction(1, 3) == bias(S, method="direct")
    with pytest.raises(ValueError):
        bias(BiasedSet(field_make(3), 2, all_vectors(3, 2)), method="walsh")


@pytest.mark.parametrize("q,k,m", [(2, 4, 5), (3, 3, 3), (4, 2, 3), (5, 2, 2)])
def test_bias_matches_loop_oracle(q, k, m):
    S = build_biased_set(q, k, m)
    assert len(S.vectors) == q**m
    assert float(bias(S)) == pytest.approx(bias_oracle(S), abs=1e-9)


def test_binary_bias_routes_agree():
    rng = np.random.default_rng(0)
    for _ in range(10):
        S = BiasedSet(field_make(2), 6, rng.integers(0, 2, size=(int(rng.integers(1, 90)), 6)))
        assert bias(S, method="walsh") == bias(S, method="direct")


def test_trace_is_balanced_for_k1():
    S = build_biased_set(3, 1, 4)
    assert bias(S) == pytest.approx(0, abs=1e-12)
    big, small = field_make(2, 4), field_make(2, 2)
    tr = trace_to_subfield(big, small, np.arange(16))
    assert np.bincount(tr, minlength=4).tolist() == [4, 4, 4, 4]


def test_trace_of_powers_bias_q2_k8_m10():
    S = build_biased_set(2, 8, 10)
    b = bias(S)
    assert isinstance(b, Fraction) and b < Fraction(1, 2)


def test_exponent_patterns():
    assert biased_exponents(2, 4) == [1, 3, 5, 7]
    assert biased_exponents(3, 4) == [1, 2, 4, 5]
    assert biased_exponents(2, 3, "consecutive") == [1, 2, 3]
    # x^2 and x have equal trace in characteristic 2, so consecutive exponents are degenerate
    assert bias(build_biased_set(2, 4, 6, "consecutive")) == 1


def _random_affine(F, k, rng):
    dim = int(rng.integers(0, k + 1))
    while True:
        D = rng.integers(0, F.q, size=(dim, k))
        if dim == 0 or rank(F, D) == dim:
            return AffineSubspace(rng.integers(0, F.q, size=k), D)


@pytest.mark.parametrize("q,k", [(2, 4), (3, 3), (4, 2)])
def test_indicator_l1_is_one(q, k):
    F = field_make(2, 2) if q == 4 else field_make(q)
    rng = np.random.default_rng(q)
    assert subspace_indicator_l1(AffineSubspace(np.zeros(k, dtype=np.int64), np.eye(k, dtype=np.int64)), F, k) \
        == pytest.approx(1.0)
    assert subspace_indicator_l1(AffineSubspace(np.ones(k, dtype=np.int64), np.zeros((0, k))), F, k) \
        == pytest.approx(1.0)
    for _ in range(50):
        assert subspace_indicator_l1(_random_affine(F, k, rng), F, k) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("q,k,m", [(2, 6, 8), (3, 4, 5)])
def test_fooling_bound(q, k, m):
    F = field_make(q)
    rng = np.random.default_rng(k)
    S = build_biased_set(q, k, m)
    b = float(bias(S))
    for _ in range(50):
        V, H = _random_affine(F, k, rng), _random_affine(F, k, rng)
        f = {}
        for x in V.points(F):
            f[tuple(map(int, x))] = f.get(tuple(map(int, x)), 0) + 1
        for x in H.points(F):
            f[tuple(map(int, x))] = f.get(tuple(map(int, x)), 0) - 1
        assert expectation_gap(S, f) <= 2 * b + 1e-12


def test_biased_thresholds():
    F = field_make(2)
    full = BiasedSet(F, 3, all_vectors(2, 3))
    res = biased_to_blocking(full, 1)
    assert res.affine_threshold == Fraction(1, 2) and res.strong_threshold == Fraction(1, 8)
    assert res.affine_ok and res.strong_ok
    half = BiasedSet(F, 1, np.array([[0], [0], [0], [1]]))
    assert bias(half) == Fraction(1, 2)
    assert not biased_to_blocking(half, 1).affine_ok


def test_biased_sets_block_when_thresholds_met():
    for q, k, m, s in [(2, 4, 8, 1), (3, 3, 5, 1), (2, 5, 10, 1)]:
        S = build_biased_set(q, k, m)
        res = biased_to_blocking(S, s)
        if res.affine_ok:
            assert verify_affine_blocking(res.affine_set, s).holds
        if res.strong_ok:
            assert verify_strong_blocking(res.strong_set, s).holds


def test_bound_tables():
    t = bound_tables(2, 4, 1)
    assert t.b_strong_lower == 9 and t.b_affine_lower_next == 10
    assert bound_tables(3, 4, 1).b_jamison == 9
    assert t.disperser_size_bound(32) == (96, 128)


DISPERSER_SWEEP = [(q, k, n, seed) for q in (2, 3) for k in range(3, 7) for n in (3, 6, 12) for seed in (0, 1)]


def test_disperser_to_blocking_sweep():
    certified = 0
    for q, k, n, seed in DISPERSER_SWEEP:
        if q == 3 and k == 6 and n != 12:
            continue
        fam = random_family(q, 2, k, n, seed)
        if not is_disperser(fam).holds:
            continue
        certified += 1
        B = disperser_to_blocking(fam)
        assert len(B) <= B.meta["size_bound"]
        assert verify_strong_blocking(B, 1).holds
        t = bound_tables(q, k, 1)
        assert len(B) >= t.b_strong_lower
        cone = affine_cone(B)
        ok = verify_affine_blocking(cone, 2).holds
        assert ok and t.cone_consistent(len(B), ok)
        assert len(cone) >= t.b_affine_lower_next
    assert certified >= 8


def test_pipeline_blocking_matches_direct_oracle():
    B = disperser_to_blocking(pipeline_small_field_disperser(2, 2, 5, theta=4))
    assert strong_oracle(B, 1) and verify_strong_blocking(B, 1).holds
