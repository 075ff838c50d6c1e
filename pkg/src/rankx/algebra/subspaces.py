"""Subspaces of GF(q)^k: canonical forms, Gaussian binomials and enumeration.

An r-dimensional subspace is represented by its r x k reduced row-echelon
basis.  Orbit representatives of full-rank k x r matrices under GL(r, q) are
the transposes of those bases (reduced column-echelon form).  The stream of
representatives is ordered by pivot set (lexicographic combinations) and then
by the free entries read as a base-q counter, most significant slot first.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .field import GF
from .linalg import nullspace, rref

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the configured budget."""

    def __init__(self, count: int, budget: int, what: str = "subspaces"):
        super().__init__(f"{count} {what} exceed the enumeration budget {budget}")
        self.count = count
        self.budget = budget


def enumeration_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("RANKX_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def gaussian_binomial(k: int, r: int, q: int) -> int:
    if r < 0 or r > k:
        raise ValueError(f"need 0 <= r <= k, got r={r}, k={k}")
    num = den = 1
    for j in range(r):
        num *= q ** (k - j) - 1
        den *= q ** (j + 1) - 1
    return num // den


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F^k stored as its canonical reduced row-echelon basis."""

    field: GF
    ambient: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @classmethod
    def span(cls, F: GF, vectors, ambient: int | None = None) -> "Subspace":
        V = np.asarray(vectors, dtype=F.dtype)
        if V.ndim == 1:
            V = V.reshape(1, -1)
        if ambient is None:
            ambient = V.shape[1]
        if V.size == 0:
            return cls(F, ambient, np.zeros((0, ambient), dtype=F.dtype))
        R, piv = rref(F, V)
        return cls(F, ambient, R[: len(piv)].copy())

    def key(self) -> bytes:
        return np.ascontiguousarray(self.basis, dtype=np.int64).tobytes() + bytes([self.dim])

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.ambient, self.key()))

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=self.field.dtype).reshape(1, -1)
        if self.dim == 0:
            return not np.any(v)
        stacked = np.concatenate([self.basis, v], axis=0)
        return len(rref(self.field, stacked)[1]) == self.dim


def orthogonal_complement(V: Subspace) -> Subspace:
    F = V.field
    if V.dim == 0:
        return Subspace(F, V.ambient, np.eye(V.ambient, dtype=F.dtype))
    N = nullspace(F, V.basis)
    return Subspace(F, V.ambient, N.reshape(-1, V.ambient))


# -- enumeration -----------------------------------------------------------


@dataclass(frozen=True)
class _PivotBlock:
    pivots: tuple[int, ...]
    slots: tuple[tuple[int, int], ...]  # (row, col) positions of free entries
    offset: int
    size: int


class SubspaceStream:
    """Indexable stream of canonical k x r representatives of r-dim subspaces of F^k."""

    def __init__(self, F: GF, k: int, r: int):
        if not 1 <= r <= k:
            raise ValueError(f"need 1 <= r <= k, got r={r}, k={k}")
        self.F, self.k, self.r, self.q = F, k, r, F.q
        blocks = []
        offset = 0
        for piv in itertools.combinations(range(k), r):
            pivset = set(piv)
            slots = tuple(
                (i, j) for i, p in enumerate(piv) for j in range(p + 1, k) if j not in pivset
            )
            size = self.q ** len(slots)
            blocks.append(_PivotBlock(piv, slots, offset, size))
            offset += size
        self.blocks = blocks
        self.total = offset
        assert offset == gaussian_binomial(k, r, self.q)

    def __len__(self):
        return self.total

    def _block_of(self, index: int) -> int:
        lo, hi = 0, len(self.blocks) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.blocks[mid].offset <= index:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def _fill(self, blk: _PivotBlock, local: np.ndarray) -> np.ndarray:
        """Matrices (B, k, r) for local counter values within one pivot block."""
        B = len(local)
        out = np.zeros((B, self.k, self.r), dtype=np.int64)
        for i, p in enumerate(blk.pivots):
            out[:, p, i] = 1
        nslots = len(blk.slots)
        rem = local.astype(np.int64).copy()
        # last slot is least significant
        for t in range(nslots - 1, -1, -1):
            i, j = blk.slots[t]
            out[:, j, i] = rem % self.q
            rem //= self.q
        return out

    def unrank(self, index: int) -> np.ndarray:
        if not 0 <= index < self.total:
            raise IndexError(index)
        b = self._block_of(index)
        blk = self.blocks[b]
        local = index - blk.offset
        M = np.zeros((self.k, self.r), dtype=np.int64)
        for i, p in enumerate(blk.pivots):
            M[p, i] = 1
        for t in range(len(blk.slots) - 1, -1, -1):
            i, j = blk.slots[t]
            M[j, i] = local % self.q
            local //= self.q
        return M

    def batches(self, start: int = 0, stop: int | None = None, batch: int = 65536
                ) -> Iterator[tuple[int, np.ndarray]]:
        """Yield (first_index, matrices) covering [start, stop) in order."""
        stop = self.total if stop is None else min(stop, self.total)
        pos = start
        while pos < stop:
            b = self._block_of(pos)
            blk = self.blocks[b]
            end = min(stop, blk.offset + blk.size, pos + batch)
            local = np.arange(pos - blk.offset, end - blk.offset, dtype=np.int64)
            yield pos, self._fill(blk, local)
            pos = end

    def sample(self, count: int, seed: int) -> np.ndarray:
        """Uniform sample (with replacement) of representatives, as (count, k, r)."""
        rng = random.Random(seed)
        return np.stack([self.unrank(rng.randrange(self.total)) for _ in range(count)]) \
            if count else np.zeros((0, self.k, self.r), dtype=np.int64)


def subspace_stream(F: GF, k: int, r: int, budget: int | None = None,
                    exhaustive: bool = True) -> SubspaceStream:
    s = SubspaceStream(F, k, r)
    limit = enumeration_budget(budget)
    if exhaustive and s.total > limit:
        raise BudgetExceeded(s.total, limit)
    return s


def enumerate_subspaces(F: GF, k: int, r: int, budget: int | None = None,
                        start: int = 0) -> Iterator[np.ndarray]:
    """Canonical full-rank k x r matrices, one per r-dimensional column space."""
    stream = subspace_stream(F, k, r, budget)
    for _, mats in stream.batches(start=start):
        yield from mats


def all_subspaces(F: GF, k: int, r: int, budget: int | None = None) -> list[Subspace]:
    """Every r-dimensional subspace as a :class:`Subspace` (row-echelon bases)."""
    if r == 0:
        return [Subspace(F, k, np.zeros((0, k), dtype=F.dtype))]
    return [Subspace(F, k, M.T.copy()) for M in enumerate_subspaces(F, k, r, budget)]
