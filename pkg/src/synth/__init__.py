"""Synthetic eco-networks with known ground truth."""

from src.synth.generator import generate
from src.synth.matching import CommunityMatch, assignment_from_cost, match_communities

__all__ = [
    "generate",
    "CommunityMatch",
    "assignment_from_cost",
    "match_communities",
]
