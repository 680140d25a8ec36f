"""Regression specifications and fitted coefficient tables."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.errors import ValidationError

INTERCEPT = "(Intercept)"


def interaction_name(a: str, b: str) -> str:
    return f"{a}:{b}"


def parse_interaction(text: str) -> tuple[str, str]:
    """Parse ``a:b`` into a pair of column names."""
    parts = [p.strip() for p in text.split(":")]
    if len(parts) != 2 or not all(parts):
        raise ValidationError(f"interaction must look like 'a:b', got {text!r}")
    return parts[0], parts[1]


@dataclass
class RegressionSpec:
    """Response, main effects and pairwise interactions of one model."""
    response: str
    terms: list[str]
    interactions: list[tuple[str, str]] = field(default_factory=list)
    standardize: bool = True

    def __post_init__(self) -> None:
        self.terms = list(self.terms)
        self.interactions = [tuple(pair) for pair in self.interactions]  # type: ignore[misc]
        if not self.terms:
            raise ValidationError("a regression needs at least one term")
        if len(set(self.terms)) != len(self.terms):
            raise ValidationError("duplicate regression terms")
        if self.response in self.terms:
            raise ValidationError(f"response {self.response!r} also appears as a term")
        for a, b in self.interactions:
            if a not in self.terms or b not in self.terms:
                raise ValidationError(f"interaction {a}:{b} uses a column that is not a term")
            if a == b:
                raise ValidationError(f"interaction {a}:{b} repeats a term")
        names = [interaction_name(a, b) for a, b in self.interactions]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate interactions")

    @property
    def columns(self) -> list[str]:
        """Design columns after the intercept, in order."""
        return self.terms + [interaction_name(a, b) for a, b in self.interactions]

    def to_dict(self) -> dict:
        return {
            "response": self.response,
            "terms": list(self.terms),
            "interactions": [interaction_name(a, b) for a, b in self.interactions],
            "standardize": self.standardize,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RegressionSpec":
        return cls(
            response=data["response"],
            terms=list(data["terms"]),
            interactions=[parse_interaction(x) for x in data.get("interactions", [])],
            standardize=bool(data.get("standardize", True)),
        )


@dataclass
class CoefficientRow:
    term: str
    estimate: float
    se: float
    t_value: float
    p_value: float

    def to_dict(self) -> dict:
        return {
            "term": self.term,
            "estimate": self.estimate,
            "se": self.se,
            "t_value": self.t_value,
            "p_value": self.p_value,
        }


@dataclass
class RegressionFit:
    """OLS estimates with classical standard errors."""
    spec: RegressionSpec
    coefficients: list[CoefficientRow]
    n: int
    r_squared: float
    df_resid: int
    covariance: np.ndarray
    n_dropped: int = 0

    def coefficient(self, term: str) -> CoefficientRow:
        for row in self.coefficients:
            if row.term == term:
                return row
        raise KeyError(term)

    def index_of(self, term: str) -> int:
        for idx, row in enumerate(self.coefficients):
            if row.term == term:
                return idx
        raise KeyError(term)

    def to_records(self) -> list[dict]:
        return [row.to_dict() for row in self.coefficients]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "n": self.n,
            "n_dropped": self.n_dropped,
            "df_resid": self.df_resid,
            "r_squared": self.r_squared,
            "coefficients": self.to_records(),
        }


@dataclass
class SimpleSlope:
    """Conditional effect of a focal term at one moderator value."""
    moderator_value: float
    slope: float
    se: float
    p_value: Optional[float]

    def to_dict(self) -> dict:
        return {
            "moderator_value": self.moderator_value,
            "slope": self.slope,
            "se": self.se,
            "p_value": self.p_value,
        }
