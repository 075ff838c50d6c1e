"""Weak subspace designs from extractor families, and the exhaustive design checker."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra.field import GF
from .algebra.kernels import intersect_counts, kernel_args
from .algebra.linalg import nullspace
from .algebra.subspaces import SubspaceStream, Subspace, orthogonal_complement, subspace_stream
from .extract import MatrixFamily


@dataclass
class SubspaceFamily:
    field: GF
    ambient: int
    dim: int
    members: list[Subspace]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for V in self.members:
            if V.ambient != self.ambient or V.dim != self.dim:
                raise ValueError("members must share ambient space and dimension")

    @property
    def degenerate(self) -> bool:
        return self.dim in (0, self.ambient)

    def stacked(self) -> np.ndarray:
        """(n, dim, ambient) array of member bases."""
        if not self.members:
            return np.zeros((0, self.dim, self.ambient), dtype=np.int64)
        return np.stack([np.asarray(V.basis, dtype=np.int64).reshape(self.dim, self.ambient)
                         for V in self.members])


@dataclass
class DesignPair:
    primal: SubspaceFamily
    dual: SubspaceFamily
    dropped: int


def family_to_designs(fam: MatrixFamily) -> DesignPair:
    """Row spans of the full-rank members and their orthogonal complements."""
    F, r, k = fam.field, fam.r, fam.k
    primal, dual = [], []
    dropped = 0
    for E in fam.matrices:
        V = Subspace.span(F, E, ambient=k)
        if V.dim < r:
            dropped += 1
            continue
        primal.append(V)
        dual.append(orthogonal_complement(V))
    if not primal:
        raise ValueError("every matrix in the family is rank-deficient")
    L = fam.theoretical_L
    src = fam.meta.get("construction")
    pm = {"source": src, "claimed_t": k - r, "claimed_A": L}
    dm = {"source": src, "claimed_t": r, "claimed_A": L}
    return DesignPair(SubspaceFamily(F, k, r, primal, pm), SubspaceFamily(F, k, k - r, dual, dm), dropped)


@dataclass
class DesignReport:
    A_meas: int
    worst: Subspace | None
    subspaces_checked: int
    exhaustive: bool
    histogram: dict[int, int]


def verify_weak_design(famS: SubspaceFamily, t: int, mode: str = "exhaustive",
                       samples: int = 0, seed: int | None = None, budget: int | None = None,
                       batch: int = 32768) -> DesignReport:
    """Max over t-dimensional W of the number of members meeting W nontrivially."""
    F, k = famS.field, famS.ambient
    members = famS.stacked()
    args = kernel_args(F)
    if mode == "exhaustive":
        stream = subspace_stream(F, k, t, budget)
        chunks = (Ms for _, Ms in stream.batches(batch=batch))
        checked = stream.total
    elif mode == "sample":
        if samples < 1 or seed is None:
            raise ValueError("sampling needs a positive sample count and a seed")
        chunks = iter([SubspaceStream(F, k, t).sample(samples, seed)])
        checked = samples
    else:
        raise ValueError(f"unknown mode {mode!r}")
    best, worst = -1, None
    hist: dict[int, int] = {}
    for Ms in chunks:
        Ws = np.ascontiguousarray(np.transpose(Ms, (0, 2, 1)))
        c = intersect_counts(members, Ws, *args)
        for v, cnt in zip(*np.unique(c, return_counts=True)):
            hist[int(v)] = hist.get(int(v), 0) + int(cnt)
        i = int(np.argmax(c))
        if c[i] > best:
            best, worst = int(c[i]), Subspace.span(F, Ws[i], ambient=k)
    return DesignReport(best, worst, checked, mode == "exhaustive", hist)


def meeting_counts(famS: SubspaceFamily, Ws: np.ndarray) -> np.ndarray:
    """For each W (rows = basis), how many members meet it nontrivially."""
    return intersect_counts(famS.stacked(), np.ascontiguousarray(Ws, dtype=np.int64), *kernel_args(famS.field))


def duality_check(primal: SubspaceFamily, dual: SubspaceFamily, t: int | None = None,
                  budget: int | None = None) -> bool:
    """Over every U of dimension t: #dual members meeting U == #primal members meeting U^perp."""
    if primal.ambient != dual.ambient or primal.field != dual.field:
        raise ValueError("families live in different spaces")
    if len(primal.members) != len(dual.members):
        raise ValueError("families have different sizes")
    F, k = primal.field, primal.ambient
    t = primal.dim if t is None else t
    stream = subspace_stream(F, k, t, budget)
    for _, Ms in stream.batches():
        Us = np.transpose(Ms, (0, 2, 1))
        comps = np.stack([nullspace(F, U).reshape(k - t, k) for U in Us]).astype(np.int64)
        if not np.array_equal(meeting_counts(dual, Us), meeting_counts(primal, comps)):
            return False
    return True
