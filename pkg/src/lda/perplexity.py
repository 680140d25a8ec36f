"""Token probabilities, fold-in for held-out individuals, and held-out perplexity."""

import math
from typing import Optional

import numpy as np
from scipy import sparse

from src.errors import EmptyNetworkError, ValidationError
from src.lda.kernels import foldin_sweep
from src.models.community import CommunityModel, FoldInConfig
from src.models.network import EcoNetwork
from src.utils.logger import get_logger
from src.utils.random import make_rng, stable_key

logger = get_logger(__name__)


def token_probability(model: CommunityModel, i: int, j: int) -> float:
    """P(individual i's next token is location j) = sum_k W_ik * H_kj."""
    if not 0 <= i < model.n_individuals:
        raise ValidationError(f"individual index {i} out of range [0, {model.n_individuals})")
    if not 0 <= j < model.n_locations:
        raise ValidationError(f"location index {j} out of range [0, {model.n_locations})")
    return float(np.dot(model.W[i], model.H[:, j]))


def align_to_model(model: CommunityModel, heldout: EcoNetwork) -> EcoNetwork:
    """Re-index held-out counts onto the model's location columns.

    Tokens at locations the model never saw are dropped and logged, and
    individuals left without tokens are removed.
    """
    index = model.location_index()
    column_map = np.array([index.get(loc, -1) for loc in heldout.locations], dtype=np.int64)

    coo = heldout.counts.tocoo()
    seen = column_map[coo.col] >= 0 if coo.nnz else np.zeros(0, dtype=bool)
    dropped = int(coo.data[~seen].sum()) if coo.nnz else 0
    if dropped:
        logger.warning(f"Dropped {dropped} held-out tokens at locations absent from training")

    counts = sparse.csr_matrix(
        (coo.data[seen], (coo.row[seen], column_map[coo.col[seen]])),
        shape=(heldout.n_individuals, model.n_locations),
    )
    # canonical CSR: tokens expand in model column order whatever the input order
    counts.sum_duplicates()
    aligned = EcoNetwork(
        individuals=heldout.individuals,
        locations=model.locations,
        counts=counts,
        neighborhood_of=heldout.neighborhood_of,
    )
    keep = np.flatnonzero(aligned.row_sums > 0)
    if keep.size == 0:
        raise EmptyNetworkError("held-out set has no tokens at locations known to the model")
    if keep.size < aligned.n_individuals:
        logger.warning(
            f"{aligned.n_individuals - keep.size} held-out individuals have no scorable tokens"
        )
        aligned = aligned.subset(keep, compact=False)
    return aligned


def fold_in(
    model: CommunityModel,
    heldout: EcoNetwork,
    foldin: Optional[FoldInConfig] = None,
) -> tuple[np.ndarray, EcoNetwork]:
    """Estimate W rows for held-out individuals by Gibbs sampling with H frozen.

    Each individual's chain uses its own substream keyed by the individual
    identifier, so results do not depend on the order of individuals.

    Returns:
        (W rows for the scored individuals, the aligned held-out network)
    """
    foldin = foldin or FoldInConfig()
    aligned = align_to_model(model, heldout)
    alpha = model.config.alpha_vector()
    alpha_sum = float(alpha.sum())
    H = np.ascontiguousarray(model.H)
    K = model.K

    W_rows = np.zeros((aligned.n_individuals, K))
    first_retained = foldin.sweeps - foldin.retained + 1
    for i, individual in enumerate(aligned.individuals):
        row = aligned.counts.getrow(i)
        location_of = np.repeat(row.indices, row.data).astype(np.int64)
        n_tokens = location_of.shape[0]
        individual_of = np.zeros(n_tokens, dtype=np.int64)

        rng = make_rng(foldin.seed, stable_key(individual))
        z = rng.integers(0, K, size=n_tokens).astype(np.int64)
        counts = np.bincount(z, minlength=K).astype(np.int64).reshape(1, K)

        accumulated = np.zeros(K)
        for sweep in range(1, foldin.sweeps + 1):
            foldin_sweep(individual_of, location_of, z, counts, alpha, H, rng.random(n_tokens))
            if sweep >= first_retained:
                accumulated += (counts[0] + alpha) / (n_tokens + alpha_sum)
        W_rows[i] = accumulated / foldin.retained

    W_rows /= W_rows.sum(axis=1, keepdims=True)
    return W_rows, aligned


def log_likelihood(W_rows: np.ndarray, H: np.ndarray, net: EcoNetwork) -> float:
    """Sum over tokens of log(W_i . H_j) for a network aligned to H's columns."""
    coo = net.counts.tocoo()
    if coo.nnz == 0:
        raise EmptyNetworkError("no tokens to score")
    probabilities = np.einsum("nk,kn->n", W_rows[coo.row], H[:, coo.col])
    terms = coo.data * np.log(probabilities)
    return math.fsum(terms.tolist())


def heldout_perplexity(
    model: CommunityModel,
    heldout: EcoNetwork,
    foldin: Optional[FoldInConfig] = None,
) -> float:
    """exp(-sum of held-out token log-probabilities / number of held-out tokens)."""
    W_rows, aligned = fold_in(model, heldout, foldin)
    total = aligned.total_tokens
    value = math.exp(-log_likelihood(W_rows, model.H, aligned) / total)
    logger.debug(
        f"Perplexity {value:.4f} over {aligned.n_individuals} individuals, {total} tokens"
    )
    return value
