"""Eco Communities - mixed-membership community detection in activity networks."""

__version__ = "0.1.0"
