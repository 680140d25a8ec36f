"""Eco-network ingestion, filtering, and description."""

from src.econet.filters import apply_filters
from src.econet.loader import EdgeListFormat, load_edgelist, load_roster
from src.econet.summary import location_popularity, neighborhood_sizes, roster_frame

__all__ = [
    "EdgeListFormat",
    "load_edgelist",
    "load_roster",
    "apply_filters",
    "location_popularity",
    "neighborhood_sizes",
    "roster_frame",
]
