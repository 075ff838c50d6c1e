import numpy as np
import pytest

from rankx.algebra import field_make, rank
from rankx.algebra.subspaces import Subspace, enumerate_subspaces, orthogonal_complement
from rankx.designs import (SubspaceFamily, duality_check, family_to_designs, meeting_counts,
                           verify_weak_design)
from rankx.extract import MatrixFamily, build_fs, build_gr, measure_badness, random_family
from rankx.funcfield import hermitian_function_field, rational_function_field


def meet_oracle(F, famS, t):
    """Max meeting count by plain rank arithmetic."""
    best = 0
    for M in enumerate_subspaces(F, famS.ambient, t):
        W = M.T
        c = sum(rank(F, np.concatenate([V.basis, W])) < V.dim + t for V in famS.members)
        best = max(best, c)
    return best


def test_identity_family_is_degenerate():
    F = field_make(3)
    pair = family_to_designs(MatrixFamily(F, 3, 3, np.eye(3, dtype=np.int64)[None]))
    assert pair.primal.degenerate and pair.dual.degenerate
    assert pair.dual.members[0].dim == 0


def test_zero_matrix_is_dropped():
    F = field_make(2)
    mats = np.array([[[1, 0, 0]], [[0, 0, 0]], [[0, 1, 1]]])
    pair = family_to_designs(MatrixFamily(F, 1, 3, mats))
    assert pair.dropped == 1 and len(pair.primal.members) == 2
    with pytest.raises(ValueError):
        family_to_designs(MatrixFamily(F, 1, 3, np.zeros((2, 1, 3), dtype=np.int64)))


def test_hermitian_fs_design():
    fam = build_fs(hermitian_function_field(3), 2, 4)
    pair = family_to_designs(fam)
    assert pair.dropped + len(pair.primal.members) == 27
    assert pair.primal.meta["claimed_A"] == 14
    rep = verify_weak_design(pair.primal, 2)
    assert rep.A_meas <= 14 and rep.subspaces_checked == 7462


def test_dims_are_consistent():
    pair = family_to_designs(random_family(3, 2, 5, 10, seed=4))
    assert all(V.dim == 2 for V in pair.primal.members)
    assert all(V.dim == 3 for V in pair.dual.members)


def test_single_member_and_lines_of_the_plane():
    F = field_make(2)
    one = SubspaceFamily(F, 3, 1, [Subspace.span(F, np.array([[1, 1, 0]]))])
    assert verify_weak_design(one, 2).A_meas <= 1
    lines = SubspaceFamily(F, 2, 1, [Subspace.span(F, np.array(v)) for v in ([[1, 0]], [[0, 1]], [[1, 1]])])
    rep = verify_weak_design(lines, 1)
    assert rep.A_meas == 1 and rep.subspaces_checked == 3


def test_mixed_members_rejected():
    F = field_make(2)
    with pytest.raises(ValueError):
        SubspaceFamily(F, 3, 1, [Subspace.span(F, np.eye(3, dtype=np.int64)[:2])])


def test_duality_examples():
    F = field_make(2)
    prim = SubspaceFamily(F, 2, 1, [Subspace.span(F, np.array([[1, 0]]))])
    dual = SubspaceFamily(F, 2, 1, [Subspace.span(F, np.array([[0, 1]]))])
    assert duality_check(prim, dual, 1)
    # over F_2 the line <(1,1)> is its own complement
    selfdual = SubspaceFamily(F, 2, 1, [Subspace.span(F, np.array([[1, 1]]))])
    assert duality_check(selfdual, selfdual, 1)


def test_duality_all_planes_of_F3_4():
    pair = family_to_designs(random_family(3, 2, 4, 12, seed=1))
    assert duality_check(pair.primal, pair.dual, 2)
    # a mismatched dual breaks it
    wrong = SubspaceFamily(pair.dual.field, 4, 2, list(pair.primal.members))
    assert not duality_check(pair.primal, wrong, 2)


CASES = [(build_fs, hermitian_function_field(2), 2, 4), (build_gr, hermitian_function_field(2), 2, 5),
         (build_fs, rational_function_field(5), 2, 4), (build_fs, rational_function_field(7), 1, 3),
         (build_fs, hermitian_function_field(3), 2, 4), (build_gr, rational_function_field(4), 2, 3)]


@pytest.mark.parametrize("builder,FF,r,k", CASES)
def test_extractor_design_equivalence(builder, FF, r, k):
    fam = builder(FF, r, k)
    pair = family_to_designs(fam)
    keep = np.array([rank(fam.field, E) == r for E in fam.matrices])
    full = MatrixFamily(fam.field, r, k, fam.matrices[keep])
    bad = measure_badness(full).max_bad
    assert bad == verify_weak_design(pair.primal, k - r).A_meas
    assert bad == verify_weak_design(pair.dual, r).A_meas
    # rank-deficient members are bad for every M
    assert measure_badness(fam).max_bad == bad + pair.dropped


@pytest.mark.parametrize("seed", range(4))
def test_kernel_meeting_counts_match_oracle(seed):
    F = field_make(3)
    pair = family_to_designs(random_family(3, 2, 4, 6, seed=seed))
    assert verify_weak_design(pair.primal, 2).A_meas == meet_oracle(F, pair.primal, 2)
    assert verify_weak_design(pair.dual, 1).A_meas == meet_oracle(F, pair.dual, 1)


def test_dropping_never_increases_design_count():
    F = field_make(2)
    rng = np.random.default_rng(3)
    for _ in range(20):
        mats = rng.integers(0, 2, size=(8, 2, 4))
        fam = MatrixFamily(F, 2, 4, mats)
        try:
            pair = family_to_designs(fam)
        except ValueError:
            continue
        assert verify_weak_design(pair.primal, 2).A_meas <= measure_badness(fam).max_bad


def test_sampled_design_check():
    pair = family_to_designs(build_fs(hermitian_function_field(3), 2, 4))
    rep = verify_weak_design(pair.primal, 2, "sample", samples=200, seed=1)
    assert not rep.exhaustive and rep.subspaces_checked == 200
    with pytest.raises(ValueError):
        verify_weak_design(pair.primal, 2, "sample", samples=5)


def test_meeting_counts_complement_identity():
    F = field_make(2)
    pair = family_to_designs(random_family(2, 2, 5, 7, seed=6))
    for M in list(enumerate_subspaces(F, 5, 2))[:50]:
        U = Subspace.span(F, M.T)
        Up = orthogonal_complement(U)
        a = meeting_counts(pair.dual, U.basis[None])[0]
        b = meeting_counts(pair.primal, Up.basis[None])[0]
        assert a == b
