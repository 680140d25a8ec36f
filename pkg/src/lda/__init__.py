"""Collapsed Gibbs LDA for eco-networks."""

from src.lda.perplexity import (
    align_to_model,
    fold_in,
    heldout_perplexity,
    log_likelihood,
    token_probability,
)
from src.lda.sampler import GibbsSampler, fit, top_locations
from src.lda.selection import choose_k, parse_grid, select_k, split_individuals

__all__ = [
    "GibbsSampler",
    "fit",
    "top_locations",
    "token_probability",
    "align_to_model",
    "fold_in",
    "log_likelihood",
    "heldout_perplexity",
    "choose_k",
    "parse_grid",
    "select_k",
    "split_individuals",
]
