"""Per-individual and per-neighborhood metric records."""

from dataclasses import dataclass
from typing import Optional


@dataclass
class IndividualMetrics:
    """Attachment metrics of one individual (``modal_community`` is 0-based)."""
    individual: str
    modal_community: int
    modal_probability: float
    gini: float
    n_locations: int
    neighborhood: Optional[str] = None

    def to_dict(self) -> dict:
        """Row for the per-individual table (communities numbered from 1)."""
        return {
            "individual_id": self.individual,
            "modal_community": self.modal_community + 1,
            "modal_probability": self.modal_probability,
            "gini": self.gini,
            "n_locations": self.n_locations,
            "neighborhood_id": self.neighborhood,
        }


@dataclass
class NeighborhoodSummary:
    """Community structure among the residents of one neighborhood.

    ``share_modal`` is the fraction of unordered resident pairs with equal
    modal communities (1.0 for single-resident neighborhoods, see
    ``singleton``); ``share_largest_modal`` is the size of the largest modal
    group over ``n_individuals``. ``total_variation`` is None below two
    residents.
    """
    neighborhood: str
    n_individuals: int
    mean_gini: float
    mean_n_locations: float
    share_modal: float
    share_largest_modal: float
    n_modal_communities: int
    total_variation: Optional[float] = None

    @property
    def singleton(self) -> bool:
        return self.n_individuals == 1

    def to_dict(self) -> dict:
        return {
            "neighborhood_id": self.neighborhood,
            "n_individuals": self.n_individuals,
            "mean_gini": self.mean_gini,
            "mean_n_locations": self.mean_n_locations,
            "share_modal": self.share_modal,
            "share_largest_modal": self.share_largest_modal,
            "n_modal_communities": self.n_modal_communities,
            "total_variation": self.total_variation,
            "singleton": self.singleton,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NeighborhoodSummary":
        """Create from a table row; empty total variation becomes None."""
        tv = data.get("total_variation")
        if tv is not None and tv == tv and tv != "":
            tv = float(tv)
        else:
            tv = None
        return cls(
            neighborhood=str(data["neighborhood_id"]),
            n_individuals=int(data["n_individuals"]),
            mean_gini=float(data["mean_gini"]),
            mean_n_locations=float(data["mean_n_locations"]),
            share_modal=float(data["share_modal"]),
            share_largest_modal=float(data["share_largest_modal"]),
            n_modal_communities=int(data["n_modal_communities"]),
            total_variation=tv,
        )


@dataclass
class CommunitySize:
    """Modal and expected membership of one community (0-based index)."""
    community: int
    n_modal: int
    expected_size: float

    def to_dict(self) -> dict:
        return {
            "community": self.community + 1,
            "n_modal": self.n_modal,
            "expected_size": self.expected_size,
        }


@dataclass
class DistributionSummary:
    """Five-number summary plus mean and sample variance of one statistic."""
    statistic: str
    n: int
    minimum: float
    q1: float
    median: float
    mean: float
    q3: float
    maximum: float
    variance: Optional[float]

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "n": self.n,
            "min": self.minimum,
            "q1": self.q1,
            "median": self.median,
            "mean": self.mean,
            "q3": self.q3,
            "max": self.maximum,
            "variance": self.variance,
        }
