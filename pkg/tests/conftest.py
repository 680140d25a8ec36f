"""Shared fixtures and hypothesis profiles."""

import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from src.config import Config, set_config
from src.models.network import EcoNetwork, Roster, RosterEntry

settings.register_profile("default", max_examples=50, deadline=None)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile(
    "dev", max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def default_config(tmp_path: Path):
    """Fresh configuration per test, writing under the test's temp directory."""
    config = Config()
    config.storage.output_dir = tmp_path / "output"
    set_config(config)
    yield config


@pytest.fixture
def write_csv(tmp_path: Path):
    """Write CSV text to a temp file and return its path."""

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def small_network() -> EcoNetwork:
    """Two neighborhoods of four, two obvious location clusters."""
    counts = np.array([
        [3, 2, 1, 0, 0, 0],
        [2, 3, 0, 0, 0, 1],
        [1, 2, 2, 0, 0, 0],
        [2, 1, 3, 0, 0, 0],
        [0, 0, 0, 3, 2, 1],
        [0, 0, 1, 2, 3, 2],
        [0, 0, 0, 1, 2, 3],
        [0, 0, 0, 2, 2, 2],
    ])
    return EcoNetwork.from_dense(
        counts,
        individuals=[f"p{i}" for i in range(8)],
        locations=[f"x{j}" for j in range(6)],
        neighborhoods=["north"] * 4 + ["south"] * 4,
    )


@pytest.fixture
def small_roster() -> Roster:
    return Roster({
        f"p{i}": RosterEntry(neighborhood="north" if i < 4 else "south") for i in range(8)
    })
