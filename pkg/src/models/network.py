"""Two-mode individual x location network model."""

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import sparse

from src.errors import EmptyNetworkError, ValidationError


@dataclass(frozen=True)
class RosterEntry:
    """Residential information for one individual."""
    neighborhood: str
    in_area: bool = True


@dataclass(frozen=True)
class Roster:
    """Per-individual neighborhood membership and study-area flags."""
    entries: Mapping[str, RosterEntry] = field(default_factory=dict)

    def __contains__(self, individual: str) -> bool:
        return individual in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def get(self, individual: str) -> Optional[RosterEntry]:
        return self.entries.get(individual)

    def neighborhood_map(self, individuals: Sequence[str]) -> dict[int, str]:
        """Map individual index -> neighborhood for the given ordering."""
        return {
            i: self.entries[ind].neighborhood
            for i, ind in enumerate(individuals)
            if ind in self.entries
        }


@dataclass(frozen=True, eq=False)
class EcoNetwork:
    """Sparse individual x location count matrix with neighborhood membership.

    ``counts[i, j]`` is the number of routine-activity reports of individual
    ``i`` at location ``j``. Rows are individuals in first-appearance order;
    columns are locations in first-appearance order.
    """
    individuals: tuple[str, ...]
    locations: tuple[str, ...]
    counts: sparse.csr_matrix
    neighborhood_of: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        counts = sparse.csr_matrix(self.counts, dtype=np.int64)
        counts.sum_duplicates()
        counts.eliminate_zeros()
        counts.sort_indices()
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "individuals", tuple(self.individuals))
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "neighborhood_of", dict(self.neighborhood_of))

        if counts.shape != (len(self.individuals), len(self.locations)):
            raise ValidationError(
                f"counts shape {counts.shape} does not match "
                f"{len(self.individuals)} individuals x {len(self.locations)} locations"
            )
        if counts.nnz and counts.data.min() < 0:
            raise ValidationError("counts must be non-negative")
        if len(set(self.individuals)) != len(self.individuals):
            raise ValidationError("individual identifiers must be unique")
        if len(set(self.locations)) != len(self.locations):
            raise ValidationError("location identifiers must be unique")
        for i in self.neighborhood_of:
            if not 0 <= i < len(self.individuals):
                raise ValidationError(f"neighborhood_of refers to unknown individual index {i}")

    @classmethod
    def from_dense(
        cls,
        matrix: Sequence[Sequence[int]] | np.ndarray,
        individuals: Optional[Sequence[str]] = None,
        locations: Optional[Sequence[str]] = None,
        neighborhoods: Optional[Sequence[str]] = None,
    ) -> "EcoNetwork":
        """Build a network from a dense count matrix (tests and synthetic data)."""
        dense = np.asarray(matrix, dtype=np.int64)
        if dense.ndim != 2:
            raise ValidationError("count matrix must be two-dimensional")
        n_ind, n_loc = dense.shape
        individuals = individuals or [f"i{i}" for i in range(n_ind)]
        locations = locations or [f"l{j}" for j in range(n_loc)]
        neighborhood_of = (
            {i: str(nb) for i, nb in enumerate(neighborhoods)} if neighborhoods is not None else {}
        )
        return cls(tuple(individuals), tuple(locations), sparse.csr_matrix(dense), neighborhood_of)

    @property
    def n_individuals(self) -> int:
        return len(self.individuals)

    @property
    def n_locations(self) -> int:
        return len(self.locations)

    @property
    def row_sums(self) -> np.ndarray:
        """N_i, the token count of every individual."""
        return np.asarray(self.counts.sum(axis=1)).ravel()

    @property
    def total_tokens(self) -> int:
        return int(self.counts.sum())

    @property
    def visitors_per_location(self) -> np.ndarray:
        """Number of distinct individuals with a report at each location."""
        return np.bincount(self.counts.indices, minlength=self.n_locations)

    def index_of(self, individual: str) -> int:
        try:
            return self.individuals.index(individual)
        except ValueError as e:
            raise ValidationError(f"Unknown individual: {individual}") from e

    def neighborhood(self, i: int) -> Optional[str]:
        return self.neighborhood_of.get(i)

    def tokens(self) -> tuple[np.ndarray, np.ndarray]:
        """Bag-of-tokens form: parallel arrays (individual index, location index).

        Row ``i`` expands to ``N_i`` tokens ordered by location index.
        """
        counts = self.counts
        row_of_entry = np.repeat(np.arange(self.n_individuals), np.diff(counts.indptr))
        individual = np.repeat(row_of_entry, counts.data)
        location = np.repeat(counts.indices, counts.data)
        return individual.astype(np.int64), location.astype(np.int64)

    def subset(self, rows: Iterable[int], compact: bool = True) -> "EcoNetwork":
        """Restrict to the given individual indices, preserving their order.

        With ``compact`` the locations left without any report are dropped.
        """
        rows = np.asarray(list(rows), dtype=np.int64)
        counts = self.counts[rows]
        locations = self.locations
        if compact:
            keep = np.flatnonzero(np.asarray(counts.sum(axis=0)).ravel() > 0)
            counts = counts[:, keep]
            locations = tuple(self.locations[j] for j in keep)
        neighborhood_of = {
            new: self.neighborhood_of[int(old)]
            for new, old in enumerate(rows)
            if int(old) in self.neighborhood_of
        }
        return EcoNetwork(
            individuals=tuple(self.individuals[int(i)] for i in rows),
            locations=locations,
            counts=counts,
            neighborhood_of=neighborhood_of,
        )

    def check_invariants(self) -> None:
        """Raise if a row is empty, a column is empty, or the network is empty."""
        if self.n_individuals == 0 or self.total_tokens == 0:
            raise EmptyNetworkError("network has no individuals or no tokens")
        empty_rows = np.flatnonzero(self.row_sums == 0)
        if empty_rows.size:
            raise ValidationError(
                f"{empty_rows.size} individuals have no activity locations "
                f"(first: {self.individuals[empty_rows[0]]})"
            )
        empty_cols = np.flatnonzero(self.visitors_per_location == 0)
        if empty_cols.size:
            raise ValidationError(
                f"{empty_cols.size} locations have no reports (first: {self.locations[empty_cols[0]]})"
            )

    def to_frame(self) -> pd.DataFrame:
        """Long-format edge list (individual_id, location_id, count)."""
        coo = self.counts.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return pd.DataFrame({
            "individual_id": [self.individuals[i] for i in coo.row[order]],
            "location_id": [self.locations[j] for j in coo.col[order]],
            "count": coo.data[order].astype(np.int64),
        })


@dataclass
class FilterReport:
    """Which individuals each sample-filtering rule removed."""
    dropped_no_locations: list[str] = field(default_factory=list)
    dropped_out_of_area: list[str] = field(default_factory=list)
    dropped_no_shared_locations: list[str] = field(default_factory=list)
    dropped_sparse_neighborhood: list[str] = field(default_factory=list)
    kept: int = 0

    @property
    def total_dropped(self) -> int:
        return (
            len(self.dropped_no_locations)
            + len(self.dropped_out_of_area)
            + len(self.dropped_no_shared_locations)
            + len(self.dropped_sparse_neighborhood)
        )

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "dropped_no_locations": list(self.dropped_no_locations),
            "dropped_out_of_area": list(self.dropped_out_of_area),
            "dropped_no_shared_locations": list(self.dropped_no_shared_locations),
            "dropped_sparse_neighborhood": list(self.dropped_sparse_neighborhood),
            "kept": self.kept,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FilterReport":
        """Create from dictionary."""
        return cls(
            dropped_no_locations=list(data.get("dropped_no_locations", [])),
            dropped_out_of_area=list(data.get("dropped_out_of_area", [])),
            dropped_no_shared_locations=list(data.get("dropped_no_shared_locations", [])),
            dropped_sparse_neighborhood=list(data.get("dropped_sparse_neighborhood", [])),
            kept=data.get("kept", 0),
        )
