"""Metrics, co-occurrence simulation and neighborhood regressions."""

from src.analysis.cooccurrence import analytic_share_probability, simulate_share_curve
from src.analysis.metrics import (
    community_sizes,
    describe,
    gini,
    individual_metrics,
    modal_community,
    summarize_neighborhoods,
    total_variation,
)
from src.analysis.regression import (
    build_neighborhood_table,
    interaction_fit,
    load_covariates,
    ols_fit,
    simple_slopes,
    standardize,
)

__all__ = [
    "gini",
    "modal_community",
    "total_variation",
    "individual_metrics",
    "summarize_neighborhoods",
    "community_sizes",
    "describe",
    "analytic_share_probability",
    "simulate_share_curve",
    "standardize",
    "load_covariates",
    "build_neighborhood_table",
    "ols_fit",
    "interaction_fit",
    "simple_slopes",
]
