"""LDA configuration, sampler state, fitted community model, and K-selection result."""

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from src.errors import NumericalError, ValidationError
from src.utils.random import check_seed

ROW_TOLERANCE = 1e-9


def _prior_vector(prior: float | Sequence[float], size: int, name: str) -> np.ndarray:
    values = np.asarray(prior, dtype=np.float64)
    if values.ndim == 0:
        values = np.full(size, float(values))
    if values.shape != (size,):
        raise ValidationError(f"{name} must be a scalar or a vector of length {size}")
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise ValidationError(f"all {name} entries must be positive")
    return values


@dataclass(frozen=True)
class LdaConfig:
    """Collapsed Gibbs settings for one fit.

    ``alpha=None`` uses the symmetric 50 / K default; ``beta`` defaults to 0.1.
    Sweeps ``burn_in + 1 .. iterations`` are averaged into the posterior mean
    unless ``last_sweep_only`` is set. With ``chains > 1`` independent restarts
    run from seed substreams and the best-fitting chain is kept.
    """
    K: int
    alpha: Optional[float | tuple[float, ...]] = None
    beta: float | tuple[float, ...] = 0.1
    iterations: int = 2000
    burn_in: int = 1000
    seed: int = 0
    last_sweep_only: bool = False
    chains: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.alpha, (list, np.ndarray)):
            object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if isinstance(self.beta, (list, np.ndarray)):
            object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        self.validate()

    def validate(self) -> None:
        if isinstance(self.K, bool) or not isinstance(self.K, (int, np.integer)) or self.K < 1:
            raise ValidationError(f"K must be a positive integer, got {self.K!r}")
        if self.iterations < 1:
            raise ValidationError("iterations must be positive")
        if not 0 <= self.burn_in < self.iterations:
            raise ValidationError("burn_in must satisfy 0 <= burn_in < iterations")
        if isinstance(self.chains, bool) or self.chains < 1:
            raise ValidationError("chains must be a positive integer")
        check_seed(self.seed)
        if self.alpha is not None:
            self.alpha_vector()
        beta = np.asarray(self.beta, dtype=np.float64)
        if not np.all(np.isfinite(beta)) or np.any(beta <= 0):
            raise ValidationError("all beta entries must be positive")

    def alpha_vector(self) -> np.ndarray:
        if self.alpha is None:
            return np.full(self.K, 50.0 / self.K)
        return _prior_vector(self.alpha, self.K, "alpha")

    def beta_vector(self, n_locations: int) -> np.ndarray:
        return _prior_vector(self.beta, n_locations, "beta")

    def with_k(self, K: int, seed: Optional[int] = None) -> "LdaConfig":
        """Same settings for another community count (vector alpha is not carried over)."""
        alpha = self.alpha if self.alpha is None or np.ndim(self.alpha) == 0 else None
        return replace(self, K=K, alpha=alpha, seed=self.seed if seed is None else seed)

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "K": int(self.K),
            "alpha": list(self.alpha) if isinstance(self.alpha, tuple) else self.alpha,
            "beta": list(self.beta) if isinstance(self.beta, tuple) else self.beta,
            "iterations": self.iterations,
            "burn_in": self.burn_in,
            "seed": self.seed,
            "last_sweep_only": self.last_sweep_only,
            "chains": self.chains,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LdaConfig":
        """Create from dictionary."""
        alpha = data.get("alpha")
        beta = data.get("beta", 0.1)
        return cls(
            K=int(data["K"]),
            alpha=tuple(alpha) if isinstance(alpha, list) else alpha,
            beta=tuple(beta) if isinstance(beta, list) else beta,
            iterations=int(data.get("iterations", 2000)),
            burn_in=int(data.get("burn_in", 1000)),
            seed=int(data.get("seed", 0)),
            last_sweep_only=bool(data.get("last_sweep_only", False)),
            chains=int(data.get("chains", 1)),
        )


@dataclass(frozen=True)
class FoldInConfig:
    """Fold-in Gibbs settings for held-out individuals (profiles frozen)."""
    sweeps: int = 50
    retained: int = 25
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sweeps < 1:
            raise ValidationError("fold-in sweeps must be positive")
        if not 1 <= self.retained <= self.sweeps:
            raise ValidationError("fold-in retained sweeps must be in [1, sweeps]")
        check_seed(self.seed)


@dataclass
class SamplerState:
    """Token-level community assignments and the count tables they induce."""
    individual_of: np.ndarray     # token -> individual index
    location_of: np.ndarray       # token -> location index
    token_assignments: np.ndarray  # token -> community index
    counts_ik: np.ndarray
    counts_kj: np.ndarray
    counts_k: np.ndarray

    @classmethod
    def from_assignments(
        cls,
        individual_of: np.ndarray,
        location_of: np.ndarray,
        assignments: np.ndarray,
        n_individuals: int,
        n_locations: int,
        K: int,
    ) -> "SamplerState":
        """Build the count tables from scratch."""
        counts_ik = np.zeros((n_individuals, K), dtype=np.int64)
        counts_kj = np.zeros((K, n_locations), dtype=np.int64)
        np.add.at(counts_ik, (individual_of, assignments), 1)
        np.add.at(counts_kj, (assignments, location_of), 1)
        return cls(
            individual_of=individual_of,
            location_of=location_of,
            token_assignments=assignments,
            counts_ik=counts_ik,
            counts_kj=counts_kj,
            counts_k=counts_kj.sum(axis=1),
        )

    @property
    def K(self) -> int:
        return self.counts_k.shape[0]

    def audit(self, row_sums: np.ndarray) -> None:
        """Check the count identities exactly; raise ``NumericalError`` on drift."""
        if np.any(self.counts_ik < 0) or np.any(self.counts_kj < 0):
            raise NumericalError("negative count in sampler state")
        if not np.array_equal(self.counts_ik.sum(axis=1), row_sums):
            raise NumericalError("counts_ik row sums differ from N_i")
        if not np.array_equal(self.counts_kj.sum(axis=1), self.counts_k):
            raise NumericalError("counts_kj row sums differ from counts_k")
        if int(self.counts_k.sum()) != int(row_sums.sum()):
            raise NumericalError("community totals differ from the token total")
        rebuilt = SamplerState.from_assignments(
            self.individual_of,
            self.location_of,
            self.token_assignments,
            self.counts_ik.shape[0],
            self.counts_kj.shape[1],
            self.K,
        )
        if not (
            np.array_equal(rebuilt.counts_ik, self.counts_ik)
            and np.array_equal(rebuilt.counts_kj, self.counts_kj)
        ):
            raise NumericalError("count tables are inconsistent with token assignments")


@dataclass(frozen=True, eq=False)
class CommunityModel:
    """Posterior-mean community assignment (W) and activity profile (H) matrices."""
    config: LdaConfig
    W: np.ndarray
    H: np.ndarray
    individuals: tuple[str, ...] = ()
    locations: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        W = np.array(self.W, dtype=np.float64)
        H = np.array(self.H, dtype=np.float64)
        if W.ndim != 2 or H.ndim != 2 or W.shape[1] != H.shape[0]:
            raise ValidationError("W must be I x K and H must be K x J")
        if W.shape[1] != self.config.K:
            raise ValidationError(f"W has {W.shape[1]} communities but config.K = {self.config.K}")
        individuals = tuple(self.individuals) or tuple(f"i{i}" for i in range(W.shape[0]))
        locations = tuple(self.locations) or tuple(f"l{j}" for j in range(H.shape[1]))
        if len(individuals) != W.shape[0] or len(locations) != H.shape[1]:
            raise ValidationError("identifier lists do not match W / H shapes")
        W.setflags(write=False)
        H.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "individuals", individuals)
        object.__setattr__(self, "locations", locations)

    @property
    def K(self) -> int:
        return self.config.K

    @property
    def n_individuals(self) -> int:
        return self.W.shape[0]

    @property
    def n_locations(self) -> int:
        return self.H.shape[1]

    def check_stochastic(self, tolerance: float = ROW_TOLERANCE) -> None:
        """Raise unless every row of W and H is strictly positive and sums to one."""
        for name, matrix in (("W", self.W), ("H", self.H)):
            if np.any(matrix <= 0):
                raise NumericalError(f"{name} has non-positive entries")
            drift = np.abs(matrix.sum(axis=1) - 1.0).max(initial=0.0)
            if drift > tolerance:
                raise NumericalError(f"{name} rows deviate from 1 by {drift:.3g}")

    def modal_communities(self) -> np.ndarray:
        """argmax_k W_ik for every individual (ties to the lowest index)."""
        return np.argmax(self.W, axis=1)

    def permute(self, order: Sequence[int]) -> "CommunityModel":
        """Relabel communities: new community ``k`` is old community ``order[k]``."""
        order = np.asarray(order, dtype=np.int64)
        if sorted(order.tolist()) != list(range(self.K)):
            raise ValidationError("order must be a permutation of 0..K-1")
        config = self.config
        if isinstance(config.alpha, tuple):
            config = replace(config, alpha=tuple(config.alpha[k] for k in order))
        return CommunityModel(
            config=config,
            W=self.W[:, order],
            H=self.H[order],
            individuals=self.individuals,
            locations=self.locations,
        )

    def location_index(self) -> dict[str, int]:
        return {loc: j for j, loc in enumerate(self.locations)}


def replicate_standard_error(perplexities: np.ndarray) -> np.ndarray:
    """Standard error of each column's replicate mean (zeros for one replicate)."""
    replicates = perplexities.shape[0]
    if replicates < 2:
        return np.zeros(perplexities.shape[1])
    return perplexities.std(axis=0, ddof=1) / np.sqrt(replicates)


@dataclass
class ModelSelectionResult:
    """Held-out perplexities per replicate and K, with the selected K."""
    grid: list[int]
    perplexities: np.ndarray  # replicates x len(grid)
    selected_K: int
    test_fraction: float = 0.1
    seed: int = 0
    rule: str = "min"
    test_individuals: list[list[str]] = field(default_factory=list)

    @property
    def mean_perplexity(self) -> np.ndarray:
        return self.perplexities.mean(axis=0)

    @property
    def standard_error(self) -> np.ndarray:
        return replicate_standard_error(self.perplexities)

    def to_records(self) -> list[dict]:
        """Long-format rows ``replicate, K, perplexity`` (replicates numbered from 1)."""
        return [
            {"replicate": r + 1, "K": int(K), "perplexity": float(self.perplexities[r, c])}
            for r in range(self.perplexities.shape[0])
            for c, K in enumerate(self.grid)
        ]

    def to_dict(self) -> dict:
        """Summary for the selection JSON."""
        return {
            "grid": [int(k) for k in self.grid],
            "replicates": int(self.perplexities.shape[0]),
            "test_fraction": self.test_fraction,
            "seed": self.seed,
            "mean_perplexity": {
                str(int(K)): float(m) for K, m in zip(self.grid, self.mean_perplexity)
            },
            "standard_error": {
                str(int(K)): float(s) for K, s in zip(self.grid, self.standard_error)
            },
            "rule": self.rule,
            "selected_K": int(self.selected_K),
        }
