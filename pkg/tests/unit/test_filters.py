"""Tests for the sample-filtering rules."""

import numpy as np
import pytest

from src.econet import apply_filters
from src.errors import EmptyNetworkError, ValidationError
from src.models.network import EcoNetwork, FilterReport, Roster, RosterEntry


def _roster(neighborhoods: dict[str, str], out_of_area: tuple[str, ...] = ()) -> Roster:
    return Roster({
        ind: RosterEntry(neighborhood=nb, in_area=ind not in out_of_area)
        for ind, nb in neighborhoods.items()
    })


def test_identity_case(small_network, small_roster):
    filtered, report = apply_filters(small_network, small_roster, min_per_neighborhood=4)

    assert report.total_dropped == 0
    assert report.kept == small_network.n_individuals
    assert filtered.individuals == small_network.individuals
    assert (filtered.counts != small_network.counts).nnz == 0


def test_individual_without_shared_location():
    net = EcoNetwork.from_dense(
        [[1, 1, 0], [1, 2, 0], [0, 0, 4]], individuals=["a", "b", "c"], locations=["x", "y", "z"]
    )
    roster = _roster({"a": "n", "b": "n", "c": "n"})
    filtered, report = apply_filters(net, roster, min_per_neighborhood=1)

    assert report.dropped_no_shared_locations == ["c"]
    assert filtered.individuals == ("a", "b")
    assert filtered.locations == ("x", "y")


def test_small_neighborhood_is_dropped(small_network):
    neighborhoods = {f"p{i}": "north" for i in range(5)}
    neighborhoods.update({"p5": "tiny", "p6": "tiny", "p7": "tiny"})
    filtered, report = apply_filters(small_network, _roster(neighborhoods), 4)

    assert report.dropped_sparse_neighborhood == ["p5", "p6", "p7"]
    assert report.kept == 5
    assert set(filtered.neighborhood_of.values()) == {"north"}


def test_rules_apply_in_order():
    net = EcoNetwork.from_dense(
        [
            [0, 0, 0],  # e: no locations
            [1, 1, 0],
            [1, 0, 0],
            [0, 1, 0],
            [1, 1, 0],  # o: out of area
            [0, 0, 2],  # s: visits z alone
        ],
        individuals=["e", "a", "b", "c", "o", "s"],
        locations=["x", "y", "z"],
    )
    roster = _roster({ind: "n" for ind in net.individuals}, out_of_area=("o",))
    filtered, report = apply_filters(net, roster, min_per_neighborhood=3)

    assert report.dropped_no_locations == ["e"]
    assert report.dropped_out_of_area == ["o"]
    assert report.dropped_no_shared_locations == ["s"]
    assert report.dropped_sparse_neighborhood == []
    assert filtered.individuals == ("a", "b", "c")
    assert filtered.locations == ("x", "y")


def test_report_partitions_the_input(small_network):
    neighborhoods = {f"p{i}": ("north" if i < 3 else "south") for i in range(8)}
    roster = _roster(neighborhoods, out_of_area=("p7",))
    _, report = apply_filters(small_network, roster, 4)

    buckets = (
        report.dropped_no_locations
        + report.dropped_out_of_area
        + report.dropped_no_shared_locations
        + report.dropped_sparse_neighborhood
    )
    assert len(buckets) == len(set(buckets))
    assert len(buckets) + report.kept == small_network.n_individuals


def test_filters_are_idempotent(small_network):
    neighborhoods = {f"p{i}": ("north" if i < 3 else "south") for i in range(8)}
    roster = _roster(neighborhoods)
    once, _ = apply_filters(small_network, roster, 4)
    twice, report = apply_filters(once, roster, 4)

    assert report.total_dropped == 0
    assert twice.individuals == once.individuals
    assert twice.locations == once.locations


def test_second_pass_can_cascade():
    # a4 shares w only with b1, whose neighborhood is too small
    net = EcoNetwork.from_dense(
        [[1, 0], [2, 0], [1, 0], [0, 1], [0, 3]],
        individuals=["a1", "a2", "a3", "a4", "b1"],
        locations=["x", "w"],
    )
    roster = _roster({"a1": "A", "a2": "A", "a3": "A", "a4": "A", "b1": "B"})
    once, report = apply_filters(net, roster, 4)

    assert report.dropped_no_shared_locations == []
    assert report.dropped_sparse_neighborhood == ["b1"]
    assert once.individuals == ("a1", "a2", "a3", "a4")
    assert once.locations == ("x", "w")
    with pytest.raises(EmptyNetworkError):
        apply_filters(once, roster, 4)

    _, relaxed = apply_filters(once, roster, 3)
    assert relaxed.dropped_no_shared_locations == ["a4"]
    assert relaxed.kept == 3


def test_compaction_preserves_counts(small_network):
    neighborhoods = {f"p{i}": ("north" if i < 3 else "south") for i in range(8)}
    filtered, _ = apply_filters(small_network, _roster(neighborhoods), 4)

    kept_rows = [small_network.index_of(ind) for ind in filtered.individuals]
    assert filtered.total_tokens == int(small_network.counts[kept_rows].sum())
    assert np.all(filtered.visitors_per_location > 0)
    assert np.all(filtered.row_sums > 0)


def test_everything_filtered_out(small_network, small_roster):
    with pytest.raises(EmptyNetworkError):
        apply_filters(small_network, small_roster, min_per_neighborhood=5)


def test_min_per_neighborhood_must_be_positive(small_network, small_roster):
    with pytest.raises(ValidationError):
        apply_filters(small_network, small_roster, min_per_neighborhood=0)


def test_individual_missing_from_roster(small_network):
    with pytest.raises(ValidationError, match="missing from the roster"):
        apply_filters(small_network, _roster({"p0": "north"}), 1)


def test_filter_report_round_trip():
    report = FilterReport(dropped_out_of_area=["a"], dropped_sparse_neighborhood=["b", "c"], kept=7)
    assert FilterReport.from_dict(report.to_dict()) == report
