"""Shared-location probability curves."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd


class ShareSeries(str, Enum):
    """Curves in a share-probability table."""
    WITHIN = "within"
    BETWEEN = "between"
    ANALYTIC = "analytic"


@dataclass
class ShareCurve:
    """Per-n share probabilities for same-modal pairs, different-modal pairs and
    two uniformly random location sets.

    ``between_mean`` / ``between_sd`` are None for single-community models.
    """
    n_values: list[int]
    within_mean: np.ndarray
    within_sd: np.ndarray
    between_mean: Optional[np.ndarray]
    between_sd: Optional[np.ndarray]
    analytic: np.ndarray
    n_locations: int
    pairs_per_n: int
    seed: int

    def to_frame(self) -> pd.DataFrame:
        """Long table ``n, series, mean, sd`` (the analytic curve has sd 0)."""
        rows = []
        for idx, n in enumerate(self.n_values):
            rows.append((n, ShareSeries.WITHIN.value, self.within_mean[idx], self.within_sd[idx]))
            if self.between_mean is not None and self.between_sd is not None:
                rows.append(
                    (n, ShareSeries.BETWEEN.value, self.between_mean[idx], self.between_sd[idx])
                )
            rows.append((n, ShareSeries.ANALYTIC.value, self.analytic[idx], 0.0))
        return pd.DataFrame(rows, columns=["n", "series", "mean", "sd"])
