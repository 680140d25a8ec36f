"""Attachment-strength and neighborhood-consistency metrics."""

from typing import Sequence

import numpy as np

from src.errors import DomainError, InsufficientSampleError, ValidationError
from src.models.community import CommunityModel
from src.models.network import EcoNetwork
from src.models.summary import (
    CommunitySize,
    DistributionSummary,
    IndividualMetrics,
    NeighborhoodSummary,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)


def _gini_rows(rows: np.ndarray) -> np.ndarray:
    """Row-wise Gini via the sorted-rank identity for sum_k sum_l |w_k - w_l|."""
    K = rows.shape[1]
    ordered = np.sort(rows, axis=1)
    weights = 2.0 * np.arange(K) - K + 1.0
    # half the ordered-pair sum; the factor 2 cancels against 2K in the denominator
    half_pairs = ordered @ weights
    return half_pairs / (K * rows.sum(axis=1))


def gini(w: Sequence[float]) -> float:
    """Gini coefficient of a community assignment vector.

    Mean absolute difference over all ordered pairs of entries divided by
    ``2K * sum(w)``: 0 for uniform membership, ``1 - 1/K`` for a one-hot vector.

    Raises:
        ValidationError: on negative entries or an all-zero vector
    """
    values = np.asarray(w, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValidationError("gini needs a non-empty vector")
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        raise ValidationError("gini needs finite non-negative entries")
    if values.sum() <= 0:
        raise ValidationError("gini is undefined for an all-zero vector")
    return float(_gini_rows(values[None, :])[0])


def modal_community(w: Sequence[float]) -> int:
    """Index of the largest entry; ties go to the lowest index."""
    values = np.asarray(w, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValidationError("modal_community needs a non-empty vector")
    return int(np.argmax(values))


def total_variation(rows: np.ndarray) -> float:
    """Aitchison total variation of a set of compositions.

    ``1/(2K)`` times the sum, over ordered component pairs, of the sample
    variance (divisor n - 1) of ``log(x_k / x_l)``. Computed from the
    covariance ``C`` of the log rows as ``trace(C) - sum(C) / K``.
    """
    X = np.asarray(rows, dtype=np.float64)
    if X.ndim != 2:
        raise ValidationError("total_variation needs an n x K matrix")
    if X.shape[0] < 2:
        raise InsufficientSampleError("total variation needs at least two rows")
    if np.any(X <= 0) or not np.all(np.isfinite(X)):
        raise DomainError("total variation needs strictly positive entries")
    K = X.shape[1]
    cov = np.atleast_2d(np.cov(np.log(X), rowvar=False, ddof=1))
    return max(0.0, float(np.trace(cov) - cov.sum() / K))


def _check_pairing(net: EcoNetwork, model: CommunityModel) -> None:
    if tuple(net.individuals) != tuple(model.individuals):
        raise ValidationError("model and network list different individuals")


def individual_metrics(net: EcoNetwork, model: CommunityModel) -> list[IndividualMetrics]:
    """Modal community, modal probability, Gini and report count per individual."""
    _check_pairing(net, model)
    modal = model.modal_communities()
    ginis = _gini_rows(model.W)
    row_sums = net.row_sums
    return [
        IndividualMetrics(
            individual=individual,
            modal_community=int(modal[i]),
            modal_probability=float(model.W[i, modal[i]]),
            gini=float(ginis[i]),
            n_locations=int(row_sums[i]),
            neighborhood=net.neighborhood(i),
        )
        for i, individual in enumerate(net.individuals)
    ]


def _share_modal(labels: np.ndarray) -> tuple[float, float]:
    """(pairwise share, largest-group share) of equal modal labels."""
    n = labels.size
    counts = np.bincount(labels)
    largest = float(counts.max() / n)
    if n < 2:
        return 1.0, largest
    same = float((counts * (counts - 1)).sum() / 2)
    return same / (n * (n - 1) / 2), largest


def summarize_neighborhoods(net: EcoNetwork, model: CommunityModel) -> list[NeighborhoodSummary]:
    """Roll individual metrics up to neighborhoods (first-appearance order)."""
    _check_pairing(net, model)
    groups: dict[str, list[int]] = {}
    unassigned = 0
    for i in range(net.n_individuals):
        neighborhood = net.neighborhood(i)
        if neighborhood is None:
            unassigned += 1
            continue
        groups.setdefault(neighborhood, []).append(i)
    if unassigned:
        logger.warning(f"{unassigned} individuals have no neighborhood and are not summarized")

    modal = model.modal_communities()
    ginis = _gini_rows(model.W)
    row_sums = net.row_sums
    summaries = []
    for neighborhood, members in groups.items():
        idx = np.asarray(members)
        labels = modal[idx]
        share, largest = _share_modal(labels)
        tv = total_variation(model.W[idx]) if idx.size >= 2 else None
        if idx.size < 2:
            logger.warning(f"Neighborhood {neighborhood} has a single resident")
        summaries.append(
            NeighborhoodSummary(
                neighborhood=neighborhood,
                n_individuals=int(idx.size),
                mean_gini=float(ginis[idx].mean()),
                mean_n_locations=float(row_sums[idx].mean()),
                share_modal=share,
                share_largest_modal=largest,
                n_modal_communities=int(np.unique(labels).size),
                total_variation=tv,
            )
        )
    return summaries


def community_sizes(model: CommunityModel) -> list[CommunitySize]:
    """Individuals per modal community and expected sizes sum_i W_ik."""
    modal_counts = np.bincount(model.modal_communities(), minlength=model.K)
    expected = model.W.sum(axis=0)
    return [
        CommunitySize(community=k, n_modal=int(modal_counts[k]), expected_size=float(expected[k]))
        for k in range(model.K)
    ]


def describe(values: Sequence[float], statistic: str = "value") -> DistributionSummary:
    """Min, quartiles (linear interpolation), mean, max and sample variance."""
    x = np.asarray(values, dtype=np.float64)
    x = x[~np.isnan(x)]
    if x.size == 0:
        raise ValidationError(f"no values to describe for {statistic}")
    q1, median, q3 = np.quantile(x, [0.25, 0.5, 0.75])
    return DistributionSummary(
        statistic=statistic,
        n=int(x.size),
        minimum=float(x.min()),
        q1=float(q1),
        median=float(median),
        mean=float(x.mean()),
        q3=float(q3),
        maximum=float(x.max()),
        variance=float(x.var(ddof=1)) if x.size >= 2 else None,
    )
