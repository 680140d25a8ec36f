"""Resolve label switching between estimated and true profiles."""

from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from src.errors import ValidationError

EXHAUSTIVE_MAX_K = 8


@dataclass
class CommunityMatch:
    """``permutation[k]`` is the estimated community matched to true community ``k``."""
    permutation: np.ndarray
    distances: np.ndarray

    @property
    def total(self) -> float:
        return float(self.distances.sum())

    @property
    def mean_distance(self) -> float:
        return float(self.distances.mean())


def assignment_from_cost(cost: np.ndarray) -> np.ndarray:
    """Permutation minimizing ``sum_k cost[perm[k], k]``.

    ``cost[a, b]`` is the cost of matching estimated ``a`` to true ``b``.
    Exhaustive search up to eight communities (first minimum in
    lexicographic order), Hungarian assignment above.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValidationError("cost must be a square matrix")
    K = cost.shape[0]
    if K <= EXHAUSTIVE_MAX_K:
        columns = np.arange(K)
        best, best_cost = None, np.inf
        for perm in permutations(range(K)):
            total = cost[list(perm), columns].sum()
            if total < best_cost:
                best, best_cost = perm, total
        return np.asarray(best, dtype=np.int64)
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(K, dtype=np.int64)
    perm[cols] = rows
    return perm


def match_communities(H_est: np.ndarray, H_true: np.ndarray) -> CommunityMatch:
    """Match estimated to true profiles by minimum total L1 distance."""
    H_est = np.asarray(H_est, dtype=np.float64)
    H_true = np.asarray(H_true, dtype=np.float64)
    if H_est.ndim != 2 or H_true.ndim != 2:
        raise ValidationError("profiles must be K x J matrices")
    if H_est.shape[0] != H_true.shape[0]:
        raise ValidationError(
            f"community counts differ: {H_est.shape[0]} estimated vs {H_true.shape[0]} true"
        )
    if H_est.shape[1] != H_true.shape[1]:
        raise ValidationError("profiles span different location sets")
    cost = np.abs(H_est[:, None, :] - H_true[None, :, :]).sum(axis=2)
    perm = assignment_from_cost(cost)
    return CommunityMatch(permutation=perm, distances=cost[perm, np.arange(cost.shape[0])])
