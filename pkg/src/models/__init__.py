"""Data models for eco-community analysis."""

from src.models.community import (
    CommunityModel,
    FoldInConfig,
    LdaConfig,
    ModelSelectionResult,
    SamplerState,
)
from src.models.manifest import FileRecord, ModelDocument, RunManifest
from src.models.network import EcoNetwork, FilterReport, Roster, RosterEntry
from src.models.regression import CoefficientRow, RegressionFit, RegressionSpec, SimpleSlope
from src.models.simulation import ShareCurve, ShareSeries
from src.models.summary import (
    CommunitySize,
    DistributionSummary,
    IndividualMetrics,
    NeighborhoodSummary,
)
from src.models.synth import GroundTruth, NeighborhoodPlan, SynthSpec, TokenPlan

__all__ = [
    "EcoNetwork",
    "FilterReport",
    "Roster",
    "RosterEntry",
    "LdaConfig",
    "FoldInConfig",
    "SamplerState",
    "CommunityModel",
    "ModelSelectionResult",
    "IndividualMetrics",
    "NeighborhoodSummary",
    "CommunitySize",
    "DistributionSummary",
    "ShareCurve",
    "ShareSeries",
    "RegressionSpec",
    "RegressionFit",
    "CoefficientRow",
    "SimpleSlope",
    "SynthSpec",
    "TokenPlan",
    "NeighborhoodPlan",
    "GroundTruth",
    "RunManifest",
    "ModelDocument",
    "FileRecord",
]
