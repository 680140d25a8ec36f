"""Descriptive tables over an eco-network."""

from collections import Counter

import numpy as np
import pandas as pd

from src.models.network import EcoNetwork


def location_popularity(net: EcoNetwork) -> pd.DataFrame:
    """Visitors and reports per location, ranked by visitors (ties by first appearance)."""
    visitors = net.visitors_per_location
    reports = np.asarray(net.counts.sum(axis=0)).ravel()
    order = np.argsort(-visitors, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(1, order.size + 1)
    frame = pd.DataFrame({
        "location_id": list(net.locations),
        "n_visitors": visitors.astype(np.int64),
        "n_reports": reports.astype(np.int64),
        "rank": rank.astype(np.int64),
    })
    return frame.sort_values("rank", kind="stable").reset_index(drop=True)


def neighborhood_sizes(net: EcoNetwork) -> dict[str, int]:
    """Individuals per neighborhood, in first-appearance order."""
    return dict(Counter(net.neighborhood_of[i] for i in sorted(net.neighborhood_of)))


def roster_frame(net: EcoNetwork) -> pd.DataFrame:
    """Roster table for a network; every listed individual is in the study area."""
    return pd.DataFrame({
        "individual_id": list(net.individuals),
        "neighborhood_id": [net.neighborhood(i) or "" for i in range(net.n_individuals)],
        "in_area": np.ones(net.n_individuals, dtype=np.int64),
    })
