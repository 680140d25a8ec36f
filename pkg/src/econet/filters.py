"""Sample-filtering rules for eco-networks."""

from collections import Counter

import numpy as np

from src.errors import EmptyNetworkError, ValidationError
from src.models.network import EcoNetwork, FilterReport, Roster
from src.utils.logger import get_logger

logger = get_logger(__name__)


def _shares_a_location(net: EcoNetwork, alive: np.ndarray) -> np.ndarray:
    """For each alive row, whether it visits a location some other alive row visits."""
    visited = (net.counts[alive] > 0).astype(np.int64)
    visitors = np.asarray(visited.sum(axis=0)).ravel()
    shared_columns = (visitors >= 2).astype(np.int64)
    return np.asarray(visited @ shared_columns).ravel() > 0


def apply_filters(
    net: EcoNetwork,
    roster: Roster,
    min_per_neighborhood: int = 4,
) -> tuple[EcoNetwork, FilterReport]:
    """Apply the exclusion rules in order and compact the location columns.

    1. individuals with no activity locations;
    2. individuals whose home is outside the study area;
    3. individuals sharing no visited location with any remaining individual;
    4. individuals in neighborhoods with fewer than ``min_per_neighborhood``
       remaining individuals (evaluated once, after rules 1-3).
    """
    if min_per_neighborhood < 1:
        raise ValidationError("min_per_neighborhood must be >= 1")
    missing = [ind for ind in net.individuals if ind not in roster]
    if missing:
        raise ValidationError(
            f"{len(missing)} individuals are missing from the roster (first: {missing[0]!r})"
        )

    report = FilterReport()
    alive = np.arange(net.n_individuals)

    no_locations = net.row_sums[alive] == 0
    report.dropped_no_locations = [net.individuals[i] for i in alive[no_locations]]
    alive = alive[~no_locations]

    out_of_area = np.array(
        [not roster.get(net.individuals[i]).in_area for i in alive], dtype=bool
    )
    report.dropped_out_of_area = [net.individuals[i] for i in alive[out_of_area]]
    alive = alive[~out_of_area]

    if alive.size:
        shared = _shares_a_location(net, alive)
        report.dropped_no_shared_locations = [net.individuals[i] for i in alive[~shared]]
        alive = alive[shared]

    neighborhood = {i: roster.get(net.individuals[i]).neighborhood for i in alive}
    sizes = Counter(neighborhood.values())
    sparse_rows = np.array(
        [sizes[neighborhood[i]] < min_per_neighborhood for i in alive], dtype=bool
    )
    report.dropped_sparse_neighborhood = [net.individuals[i] for i in alive[sparse_rows]]
    alive = alive[~sparse_rows]

    report.kept = int(alive.size)
    logger.info(
        f"Filtering kept {report.kept} of {net.n_individuals} individuals "
        f"(no locations: {len(report.dropped_no_locations)}, "
        f"out of area: {len(report.dropped_out_of_area)}, "
        f"no shared locations: {len(report.dropped_no_shared_locations)}, "
        f"neighborhood < {min_per_neighborhood}: {len(report.dropped_sparse_neighborhood)})"
    )
    if alive.size == 0:
        raise EmptyNetworkError("all individuals were filtered out")

    filtered = net.subset(alive, compact=True)
    filtered = EcoNetwork(
        individuals=filtered.individuals,
        locations=filtered.locations,
        counts=filtered.counts,
        neighborhood_of=roster.neighborhood_map(filtered.individuals),
    )
    return filtered, report
