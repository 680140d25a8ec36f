"""Utility modules for Eco Communities."""

from src.utils.logger import ProgressTracker, get_logger, setup_logging
from src.utils.random import derive_seed, make_rng, stable_key

__all__ = [
    "get_logger",
    "setup_logging",
    "ProgressTracker",
    "make_rng",
    "derive_seed",
    "stable_key",
]
