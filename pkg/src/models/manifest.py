"""On-disk documents: run manifests and fitted model files."""

from datetime import datetime, timezone
from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.models.community import CommunityModel, LdaConfig

MODEL_FORMAT_VERSION = 1


def utc_now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


class FileRecord(BaseModel):
    """A file with its SHA-256 content hash."""
    path: str
    sha256: str


class RunManifest(BaseModel):
    """Record of one command invocation."""
    command: str
    tool_version: str
    started_at: datetime = Field(default_factory=utc_now)
    finished_at: Optional[datetime] = None
    inputs: list[FileRecord] = Field(default_factory=list)
    outputs: list[FileRecord] = Field(default_factory=list)
    config: dict[str, Any] = Field(default_factory=dict)
    parameters: dict[str, Any] = Field(default_factory=dict)
    seeds: dict[str, int] = Field(default_factory=dict)

    def output_hashes(self) -> dict[str, str]:
        return {record.path: record.sha256 for record in self.outputs}


class ModelDocument(BaseModel):
    """Serialized CommunityModel."""
    format_version: Literal[1] = MODEL_FORMAT_VERSION
    config: dict[str, Any]
    individuals: list[str]
    locations: list[str]
    W: list[list[float]]
    H: list[list[float]]

    @model_validator(mode="after")
    def _check_shapes(self) -> "ModelDocument":
        K = int(self.config.get("K", 0))
        if len(self.W) != len(self.individuals):
            raise ValueError("W has a row count different from the individual list")
        if len(self.H) != K:
            raise ValueError(f"H has {len(self.H)} rows but K = {K}")
        if any(len(row) != K for row in self.W):
            raise ValueError("W rows must have K entries")
        if any(len(row) != len(self.locations) for row in self.H):
            raise ValueError("H rows must have one entry per location")
        return self

    @classmethod
    def from_model(cls, model: CommunityModel) -> "ModelDocument":
        return cls(
            config=model.config.to_dict(),
            individuals=list(model.individuals),
            locations=list(model.locations),
            W=model.W.tolist(),
            H=model.H.tolist(),
        )

    def to_model(self) -> CommunityModel:
        return CommunityModel(
            config=LdaConfig.from_dict(self.config),
            W=np.asarray(self.W, dtype=np.float64),
            H=np.asarray(self.H, dtype=np.float64),
            individuals=tuple(self.individuals),
            locations=tuple(self.locations),
        )
