"""Edge-list and roster ingestion."""

from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from scipy import sparse

from src.errors import EmptyNetworkError, ParseError, ValidationError
from src.models.network import EcoNetwork, Roster, RosterEntry
from src.storage import load_csv
from src.utils.logger import get_logger

logger = get_logger(__name__)

EDGE_COLUMNS = ("individual_id", "location_id", "count")
ROSTER_COLUMNS = ("individual_id", "neighborhood_id", "in_area")


class EdgeListFormat(str, Enum):
    """Supported edge-list layouts."""
    LONG_CSV = "long-csv"


def _read_csv(path: Path, required: tuple[str, ...]) -> pd.DataFrame:
    """Read a CSV as strings; row ``r`` of the frame is file line ``r + 2``."""
    path = Path(path)
    frame = load_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=False)
    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise ParseError(f"missing required column(s) {', '.join(missing)}", path=path, line=1)
    return frame


def _text(value) -> str:
    """Stripped cell text; cells missing from short rows read as empty."""
    return value.strip() if isinstance(value, str) else ""


def _is_blank(row: pd.Series) -> bool:
    return all(not _text(v) for v in row.values)


def load_roster(path: Path) -> Roster:
    """Load ``individual_id,neighborhood_id,in_area`` rows (``in_area`` optional, 0/1)."""
    path = Path(path)
    frame = _read_csv(path, ROSTER_COLUMNS[:2])
    has_flag = "in_area" in frame.columns
    entries: dict[str, RosterEntry] = {}

    for offset, row in frame.iterrows():
        line = int(offset) + 2
        if _is_blank(row):
            continue
        individual = _text(row["individual_id"])
        neighborhood = _text(row["neighborhood_id"])
        if not individual or not neighborhood:
            raise ParseError("empty individual_id or neighborhood_id", path=path, line=line)
        flag = _text(row["in_area"]) if has_flag else "1"
        if flag not in ("0", "1", ""):
            raise ParseError(f"in_area must be 0 or 1, got {flag!r}", path=path, line=line)
        if individual in entries:
            raise ParseError(f"duplicate roster entry for {individual!r}", path=path, line=line)
        entries[individual] = RosterEntry(neighborhood=neighborhood, in_area=flag != "0")

    logger.info(f"Loaded roster with {len(entries)} individuals from {path}")
    return Roster(entries)


def load_edgelist(
    path: Path,
    format: EdgeListFormat | str = EdgeListFormat.LONG_CSV,
    roster: Optional[Roster] = None,
) -> EcoNetwork:
    """Load a long-format edge list into an EcoNetwork.

    Repeated (individual, location) rows are summed; a missing or empty
    ``count`` means 1. Individuals and locations are ordered by first
    appearance. With a roster, every edge-list individual must be listed,
    roster individuals without edges are appended as empty rows, and
    neighborhood membership is attached.
    """
    path = Path(path)
    if EdgeListFormat(format) is not EdgeListFormat.LONG_CSV:
        raise ValidationError(f"Unsupported edge-list format: {format}")
    frame = _read_csv(path, EDGE_COLUMNS[:2])
    has_count = "count" in frame.columns

    individual_index: dict[str, int] = {}
    location_index: dict[str, int] = {}
    rows: list[int] = []
    cols: list[int] = []
    values: list[int] = []

    for offset, row in frame.iterrows():
        line = int(offset) + 2
        if _is_blank(row):
            continue
        individual = _text(row["individual_id"])
        location = _text(row["location_id"])
        if not individual or not location:
            raise ParseError("empty individual_id or location_id", path=path, line=line)
        raw = _text(row["count"]) if has_count else ""
        try:
            count = int(raw) if raw else 1
        except ValueError as e:
            raise ParseError(f"count is not an integer: {raw!r}", path=path, line=line) from e
        if count < 0:
            raise ValidationError(f"{path}:{line}: negative count {count}")
        if roster is not None and individual not in roster:
            raise ValidationError(f"{path}:{line}: individual {individual!r} is not in the roster")

        rows.append(individual_index.setdefault(individual, len(individual_index)))
        cols.append(location_index.setdefault(location, len(location_index)))
        values.append(count)

    if not rows:
        raise EmptyNetworkError(f"{path} has no edges")

    if roster is not None:
        for individual in roster:
            individual_index.setdefault(individual, len(individual_index))

    individuals = tuple(individual_index)
    locations = tuple(location_index)
    counts = sparse.csr_matrix(
        (np.asarray(values, dtype=np.int64), (np.asarray(rows), np.asarray(cols))),
        shape=(len(individuals), len(locations)),
    )
    counts.sum_duplicates()

    # locations that only ever appear with count 0 carry no reports
    visited = np.flatnonzero(np.asarray(counts.sum(axis=0)).ravel() > 0)
    if visited.size < len(locations):
        logger.info(f"Dropped {len(locations) - visited.size} locations with zero reports")
        counts = counts[:, visited]
        locations = tuple(locations[j] for j in visited)

    net = EcoNetwork(
        individuals=individuals,
        locations=locations,
        counts=counts,
        neighborhood_of=roster.neighborhood_map(individuals) if roster is not None else {},
    )
    logger.info(
        f"Loaded {net.n_individuals} individuals, {net.n_locations} locations, "
        f"{net.total_tokens} reports from {path}"
    )
    return net
