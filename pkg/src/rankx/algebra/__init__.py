"""Finite fields, dense linear algebra and subspace enumeration."""

from .field import GF, FieldError, field_arith, field_make, field_of_order, is_prime, next_prime
from .linalg import (DimensionError, RankDeficient, cauchy_binet_expand, det, greedy_column_select,
                     mat_rank_det, matmul, nullspace, rank, rref, solve)
from .subspaces import (BudgetExceeded, Subspace, SubspaceStream, all_subspaces, enumerate_subspaces,
                        enumeration_budget, gaussian_binomial, orthogonal_complement, subspace_stream)
from .tower import TowerContext, embed_subfield, subfield_decompose

__all__ = [
    "GF", "FieldError", "field_arith", "field_make", "field_of_order", "is_prime", "next_prime",
    "DimensionError", "RankDeficient", "cauchy_binet_expand", "det", "greedy_column_select",
    "mat_rank_det", "matmul", "nullspace", "rank", "rref", "solve",
    "BudgetExceeded", "Subspace", "SubspaceStream", "all_subspaces", "enumerate_subspaces",
    "enumeration_budget", "gaussian_binomial", "orthogonal_complement", "subspace_stream",
    "TowerContext", "embed_subfield", "subfield_decompose",
]
