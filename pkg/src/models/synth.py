"""Synthetic eco-network specifications and their latent truth."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

import numpy as np

from src.errors import ValidationError
from src.utils.random import check_seed


class NeighborhoodPlan(str, Enum):
    """How synthetic individuals are grouped into neighborhoods."""
    ALIGNED = "aligned"  # residents share their dominant community
    MIXED = "mixed"      # independent of membership
    CUSTOM = "custom"    # explicit individual -> neighborhood map


@dataclass(frozen=True)
class TokenPlan:
    """Reports per individual: ``low == high`` is a fixed count, else uniform on [low, high]."""
    low: int = 10
    high: int = 10

    def __post_init__(self) -> None:
        if self.low < 1 or self.high < self.low:
            raise ValidationError("token counts need 1 <= low <= high")

    @classmethod
    def fixed(cls, n: int) -> "TokenPlan":
        return cls(low=n, high=n)

    @classmethod
    def parse(cls, text: str) -> "TokenPlan":
        """``"10"`` or ``"5:20"``."""
        try:
            parts = [int(p) for p in str(text).split(":")]
        except ValueError as e:
            raise ValidationError(f"bad token plan {text!r}") from e
        if len(parts) == 1:
            return cls.fixed(parts[0])
        if len(parts) == 2:
            return cls(low=parts[0], high=parts[1])
        raise ValidationError(f"bad token plan {text!r}")

    def to_dict(self) -> dict:
        return {"low": self.low, "high": self.high}


def _positive_prior(value: float | Sequence[float], size: int, name: str) -> np.ndarray:
    values = np.asarray(value, dtype=np.float64)
    if values.ndim == 0:
        values = np.full(size, float(values))
    if values.shape != (size,) or np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise ValidationError(f"{name} must be positive (scalar or length {size})")
    return values


@dataclass
class SynthSpec:
    """Parameters of one draw from the LDA generative model."""
    I: int
    J: int
    K_true: int
    alpha_true: float | Sequence[float] = 0.1
    beta_true: float | Sequence[float] = 0.1
    tokens: TokenPlan = field(default_factory=TokenPlan)
    neighborhood_plan: NeighborhoodPlan = NeighborhoodPlan.ALIGNED
    neighborhood_size: int = 10
    custom_neighborhoods: Optional[Mapping[str, str]] = None
    seed: int = 0

    def __post_init__(self) -> None:
        self.neighborhood_plan = NeighborhoodPlan(self.neighborhood_plan)
        self.validate()

    def validate(self) -> None:
        for name in ("I", "J", "K_true"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be positive")
        if self.K_true > self.J:
            raise ValidationError("K_true must not exceed J")
        if self.neighborhood_size < 1:
            raise ValidationError("neighborhood_size must be positive")
        if self.neighborhood_plan is NeighborhoodPlan.CUSTOM and not self.custom_neighborhoods:
            raise ValidationError("the custom plan needs a neighborhood map")
        check_seed(self.seed)
        self.alpha_vector()
        self.beta_vector()

    def alpha_vector(self) -> np.ndarray:
        return _positive_prior(self.alpha_true, self.K_true, "alpha_true")

    def beta_vector(self) -> np.ndarray:
        return _positive_prior(self.beta_true, self.J, "beta_true")

    def to_dict(self) -> dict:
        def plain(value):
            return value if np.ndim(value) == 0 else [float(v) for v in value]

        return {
            "I": self.I,
            "J": self.J,
            "K_true": self.K_true,
            "alpha_true": plain(self.alpha_true),
            "beta_true": plain(self.beta_true),
            "tokens": self.tokens.to_dict(),
            "neighborhood_plan": self.neighborhood_plan.value,
            "neighborhood_size": self.neighborhood_size,
            "seed": self.seed,
        }


@dataclass
class GroundTruth:
    """Latent membership, profiles and dominant labels behind a synthetic network.

    ``H`` spans all ``J`` generated locations; the network only keeps visited
    ones, so use ``profiles_for`` to compare against a fitted model.
    """
    W: np.ndarray
    H: np.ndarray
    labels: np.ndarray
    individuals: tuple[str, ...]
    locations: tuple[str, ...]

    def profiles_for(self, location_ids: Sequence[str]) -> np.ndarray:
        """H restricted to ``location_ids`` (in that order) with rows renormalized."""
        index = {loc: j for j, loc in enumerate(self.locations)}
        try:
            columns = [index[loc] for loc in location_ids]
        except KeyError as e:
            raise ValidationError(f"unknown location {e.args[0]!r}") from e
        H = self.H[:, columns]
        totals = H.sum(axis=1, keepdims=True)
        return H / np.where(totals > 0, totals, 1.0)

    def labels_for(self, individual_ids: Sequence[str]) -> np.ndarray:
        index = {ind: i for i, ind in enumerate(self.individuals)}
        return self.labels[[index[ind] for ind in individual_ids]]

    def to_dict(self) -> dict:
        return {
            "individuals": list(self.individuals),
            "locations": list(self.locations),
            "labels": [int(k) + 1 for k in self.labels],
            "W": self.W.tolist(),
            "H": self.H.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GroundTruth":
        return cls(
            W=np.asarray(data["W"], dtype=np.float64),
            H=np.asarray(data["H"], dtype=np.float64),
            labels=np.asarray(data["labels"], dtype=np.int64) - 1,
            individuals=tuple(data["individuals"]),
            locations=tuple(data["locations"]),
        )
