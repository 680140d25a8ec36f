"""Configuration management for Eco Communities."""

import os
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional

from dotenv import dotenv_values, load_dotenv

from src.errors import ValidationError

load_dotenv()

ENV_PREFIX = "ECO_"


class PairWeighting(str, Enum):
    """How community (pair) strata are drawn in the share simulation."""
    SIZE = "size"
    UNIFORM = "uniform"


class SelectionRule(str, Enum):
    """How the K grid's mean perplexities pick a K."""
    MINIMUM = "min"
    ONE_SE = "one-se"


class ExportFormat(str, Enum):
    """Supported table export formats."""
    CSV = "csv"
    JSON = "json"
    LATEX = "latex"


@dataclass
class SamplerConfig:
    """Defaults for collapsed Gibbs fitting and fold-in."""
    alpha: Optional[float] = None  # None means 50 / K
    beta: float = 0.1
    iterations: int = 2000
    burn_in: int = 1000
    last_sweep_only: bool = False
    chains: int = 1
    foldin_sweeps: int = 50
    foldin_retained: int = 25
    log_every: int = 100


@dataclass
class SelectionConfig:
    """Defaults for the held-out perplexity K search."""
    grid: str = "5:140"
    replicates: int = 20
    test_fraction: float = 0.1
    jobs: int = 1
    rule: SelectionRule = SelectionRule.MINIMUM


@dataclass
class FilterConfig:
    """Defaults for sample filtering."""
    min_per_neighborhood: int = 4


@dataclass
class SimulationConfig:
    """Defaults for the shared-location simulation."""
    n_values: str = "1:35"
    pairs_per_n: int = 10000
    weighting: PairWeighting = PairWeighting.SIZE


@dataclass
class StorageConfig:
    """Configuration for storage."""
    output_dir: Path = field(default_factory=lambda: Path("./output"))


_SECTIONS = ("sampler", "selection", "filters", "simulation", "storage")


@dataclass
class Config:
    """Main configuration class."""
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    selection: SelectionConfig = field(default_factory=SelectionConfig)
    filters: FilterConfig = field(default_factory=FilterConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    storage: StorageConfig = field(default_factory=StorageConfig)

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from ``ECO_*`` environment variables."""
        values = {
            key[len(ENV_PREFIX):]: value
            for key, value in os.environ.items()
            if key.upper().startswith(ENV_PREFIX)
        }
        return cls().updated(values, strict=False)

    @classmethod
    def from_file(cls, path: Path, base: Optional["Config"] = None) -> "Config":
        """Overlay a ``key=value`` file on ``base`` (environment config by default)."""
        path = Path(path)
        if not path.exists():
            raise ValidationError(f"Config file not found: {path}")
        values = dotenv_values(path)
        return (base or cls.from_env()).updated(
            {k: v for k, v in values.items() if v is not None}
        )

    def updated(self, values: Mapping[str, Any], strict: bool = True) -> "Config":
        """Return a copy with flat ``field=value`` overrides applied.

        Keys are matched case-insensitively against the field names of every
        section, with an optional ``ECO_`` prefix.
        """
        index = self._field_index()
        sections = {name: getattr(self, name) for name in _SECTIONS}
        changes: dict[str, dict[str, Any]] = {name: {} for name in _SECTIONS}

        for raw_key, raw_value in values.items():
            key = raw_key.lower()
            if key.startswith(ENV_PREFIX.lower()):
                key = key[len(ENV_PREFIX):]
            if key not in index:
                if not strict:
                    continue
                raise ValidationError(f"Unknown configuration key: {raw_key}")
            section, field_type = index[key]
            changes[section][key] = _coerce(raw_key, raw_value, field_type)

        return Config(**{
            name: replace(sections[name], **changes[name]) if changes[name] else sections[name]
            for name in _SECTIONS
        })

    def _field_index(self) -> dict[str, tuple[str, Any]]:
        index: dict[str, tuple[str, Any]] = {}
        for name in _SECTIONS:
            for f in fields(getattr(self, name)):
                index[f.name] = (name, f.type)
        return index

    def to_dict(self) -> dict:
        """Convert to dictionary for manifests."""
        result: dict[str, dict[str, Any]] = {}
        for name in _SECTIONS:
            section = getattr(self, name)
            result[name] = {
                f.name: _plain(getattr(section, f.name)) for f in fields(section)
            }
        return result


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    return value


def _coerce(key: str, value: Any, field_type: Any) -> Any:
    """Coerce a string setting to the declared field type."""
    if not isinstance(value, str):
        return value
    text = value.strip()
    type_name = field_type if isinstance(field_type, str) else getattr(field_type, "__name__", "")
    try:
        if "Optional[float]" in str(field_type):
            return None if text.lower() in ("", "none", "auto") else float(text)
        if type_name == "bool":
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if type_name == "int":
            return int(text)
        if type_name == "float":
            return float(text)
        if type_name == "Path":
            return Path(text)
        if type_name == "PairWeighting":
            return PairWeighting(text.lower())
        if type_name == "SelectionRule":
            return SelectionRule(text.lower())
    except ValueError as e:
        raise ValidationError(f"Invalid value for {key}: {value!r}") from e
    return text


# Global config instance
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = Config.from_env()
    return _config


def set_config(config: Config) -> None:
    """Set the global configuration instance."""
    global _config
    _config = config


def load_config(path: Optional[Path] = None) -> Config:
    """Build the configuration for a CLI run and install it globally."""
    config = Config.from_file(path) if path else Config.from_env()
    set_config(config)
    return config
