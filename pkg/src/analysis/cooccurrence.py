"""Probability that two individuals share an activity location."""

from typing import Optional, Sequence

import numpy as np
from scipy.special import gammaln

from src.config import PairWeighting
from src.errors import ValidationError
from src.models.community import CommunityModel
from src.models.simulation import ShareCurve
from src.utils.logger import get_logger
from src.utils.random import check_seed, make_rng

logger = get_logger(__name__)

WITHIN_STREAM = 0
BETWEEN_STREAM = 1
CHUNK_PAIRS = 2048


def analytic_share_probability(n: int, J: int) -> float:
    """P(two independent uniform n-subsets of J locations intersect).

    ``1 - C(J-n, n) / C(J, n)``, evaluated in log space.
    """
    if int(n) != n or int(J) != J:
        raise ValidationError("n and J must be integers")
    n, J = int(n), int(J)
    if not 1 <= n <= J:
        raise ValidationError(f"need 1 <= n <= J, got n={n}, J={J}")
    if 2 * n > J:
        return 1.0
    log_disjoint = 2.0 * gammaln(J - n + 1) - gammaln(J - 2 * n + 1) - gammaln(J + 1)
    return float(-np.expm1(log_disjoint))


def _draw_sets(rng: np.random.Generator, profile: np.ndarray, size: int, n: int) -> np.ndarray:
    """``size`` location sets of ``n`` distinct locations drawn sequentially from ``profile``.

    Smallest exponential race keys ``E_j / p_j`` give the same law as drawing
    one location at a time and renormalizing over the rest.
    """
    with np.errstate(divide="ignore"):
        keys = rng.standard_exponential((size, profile.size)) / profile
    return np.argpartition(keys, n - 1, axis=1)[:, :n]


def _share_rate(
    rng: np.random.Generator, profile_a: np.ndarray, profile_b: np.ndarray, pairs: int, n: int
) -> np.ndarray:
    """Indicator, per simulated pair, that the two location sets intersect."""
    shared = np.empty(pairs, dtype=bool)
    J = profile_a.size
    for start in range(0, pairs, CHUNK_PAIRS):
        size = min(CHUNK_PAIRS, pairs - start)
        first = _draw_sets(rng, profile_a, size, n)
        second = _draw_sets(rng, profile_b, size, n)
        rows = np.arange(size)[:, None]
        mask = np.zeros((size, J), dtype=bool)
        mask[rows, first] = True
        shared[start:start + size] = mask[rows, second].any(axis=1)
    return shared


def _stratum_weights(sizes: np.ndarray, weighting: PairWeighting) -> tuple[np.ndarray, np.ndarray]:
    """Within weights per community and between weights per ordered pair (K x K, zero diagonal)."""
    K = sizes.size
    base = sizes.astype(np.float64) if weighting is PairWeighting.SIZE else np.ones(K)
    within = base / base.sum()
    between = np.outer(base, base)
    np.fill_diagonal(between, 0.0)
    total = between.sum()
    return within, (between / total if total > 0 else between)


def _series(
    H: np.ndarray,
    weights: np.ndarray,
    strata: list[tuple[int, int]],
    n: int,
    pairs_per_n: int,
    seed: int,
    stream: int,
) -> tuple[float, float]:
    """Mean over all pairs and SD across stratum means for one (n, series) cell."""
    allocation = make_rng(seed, n, stream).multinomial(pairs_per_n, weights)
    hits = 0
    stratum_means = []
    for (a, b), m in zip(strata, allocation):
        if m == 0:
            continue
        rng = make_rng(seed, n, stream, a, b)
        shared = _share_rate(rng, H[a], H[b], int(m), n)
        hits += int(shared.sum())
        stratum_means.append(shared.mean())
    sd = float(np.std(stratum_means, ddof=1)) if len(stratum_means) >= 2 else 0.0
    return hits / pairs_per_n, sd


def simulate_share_curve(
    model: CommunityModel,
    n_values: Sequence[int],
    pairs_per_n: int,
    seed: int,
    weighting: PairWeighting | str = PairWeighting.SIZE,
    n_locations: Optional[int] = None,
) -> ShareCurve:
    """Simulate share probabilities from the fitted activity pattern profiles.

    For each ``n``, pseudo-individual pairs are drawn from the same community
    (within) or from two different communities (between), each visiting ``n``
    distinct locations drawn from its community profile. Strata are weighted
    by modal community size (``size``) or equally (``uniform``). The analytic
    baseline uses ``n_locations`` (default: the model's location count).

    Args:
        model: Fitted community model
        n_values: Locations per pseudo-individual
        pairs_per_n: Simulated pairs per series and n
        seed: Root seed; every (n, series, stratum) cell has its own substream
        weighting: Stratum weighting
        n_locations: J for the analytic curve

    Returns:
        ShareCurve; ``between`` is None for single-community models
    """
    check_seed(seed)
    weighting = PairWeighting(weighting)
    if pairs_per_n < 1:
        raise ValidationError("pairs_per_n must be positive")
    n_values = [int(n) for n in n_values]
    if not n_values or min(n_values) < 1:
        raise ValidationError("n values must be positive")
    J_analytic = model.n_locations if n_locations is None else int(n_locations)

    H = model.H
    K = model.K
    sizes = np.bincount(model.modal_communities(), minlength=K)
    within_w, between_w = _stratum_weights(sizes, weighting)
    within_strata = [(k, k) for k in range(K)]
    between_strata = [(a, b) for a in range(K) for b in range(K)]
    between_flat = between_w.ravel()
    has_between = K > 1 and between_flat.sum() > 0
    if K > 1 and not has_between:
        logger.warning("Only one community has modal members; skipping the between series")

    support = (H > 0).sum(axis=1)
    used = np.flatnonzero(within_w > 0)
    for n in n_values:
        short = [int(k) for k in used if support[k] < n]
        if short:
            raise ValidationError(
                f"n={n} exceeds the {int(support[short[0]])} locations with positive mass "
                f"in community {short[0] + 1}"
            )

    within_mean, within_sd, between_mean, between_sd, analytic = [], [], [], [], []
    for n in n_values:
        mean, sd = _series(H, within_w, within_strata, n, pairs_per_n, seed, WITHIN_STREAM)
        within_mean.append(mean)
        within_sd.append(sd)
        if has_between:
            mean, sd = _series(
                H, between_flat, between_strata, n, pairs_per_n, seed, BETWEEN_STREAM
            )
            between_mean.append(mean)
            between_sd.append(sd)
        analytic.append(analytic_share_probability(n, J_analytic))
        logger.debug(f"n={n}: within={within_mean[-1]:.4f}")

    logger.info(f"Simulated share curves for {len(n_values)} values of n")
    return ShareCurve(
        n_values=n_values,
        within_mean=np.asarray(within_mean),
        within_sd=np.asarray(within_sd),
        between_mean=np.asarray(between_mean) if has_between else None,
        between_sd=np.asarray(between_sd) if has_between else None,
        analytic=np.asarray(analytic),
        n_locations=J_analytic,
        pairs_per_n=pairs_per_n,
        seed=seed,
    )
