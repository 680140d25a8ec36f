"""Tests for the EcoNetwork data model."""

import numpy as np
import pytest
from scipy import sparse

from src.errors import EmptyNetworkError, ValidationError
from src.models.network import EcoNetwork


def test_tokens_expand_rows(small_network):
    individual, location = small_network.tokens()

    assert individual.size == small_network.total_tokens
    assert np.bincount(individual).tolist() == small_network.row_sums.tolist()
    dense = np.zeros((8, 6), dtype=np.int64)
    np.add.at(dense, (individual, location), 1)
    assert np.array_equal(dense, small_network.counts.toarray())


def test_subset_keeps_order_and_neighborhoods(small_network):
    sub = small_network.subset([5, 1], compact=True)

    assert sub.individuals == ("p5", "p1")
    assert sub.neighborhood_of == {0: "south", 1: "north"}
    assert np.all(sub.visitors_per_location > 0)
    assert sub.total_tokens == int(small_network.row_sums[[5, 1]].sum())


def test_subset_without_compaction_keeps_locations(small_network):
    sub = small_network.subset([0], compact=False)
    assert sub.locations == small_network.locations


def test_rejects_duplicate_identifiers():
    with pytest.raises(ValidationError, match="unique"):
        EcoNetwork.from_dense([[1], [1]], individuals=["a", "a"], locations=["x"])


def test_rejects_negative_counts():
    with pytest.raises(ValidationError, match="non-negative"):
        EcoNetwork.from_dense([[1, -1]])


def test_rejects_shape_mismatch():
    with pytest.raises(ValidationError, match="shape"):
        EcoNetwork(("a",), ("x", "y"), sparse.csr_matrix(np.ones((1, 3), dtype=np.int64)))


def test_check_invariants():
    EcoNetwork.from_dense([[1, 0], [0, 2]]).check_invariants()

    with pytest.raises(ValidationError, match="no activity locations"):
        EcoNetwork.from_dense([[1, 1], [0, 0]]).check_invariants()
    with pytest.raises(ValidationError, match="no reports"):
        EcoNetwork.from_dense([[1, 0], [1, 0]]).check_invariants()
    with pytest.raises(EmptyNetworkError):
        EcoNetwork.from_dense(np.zeros((0, 0))).check_invariants()


def test_to_frame(small_network):
    frame = small_network.to_frame()

    assert list(frame.columns) == ["individual_id", "location_id", "count"]
    assert int(frame["count"].sum()) == small_network.total_tokens
    assert frame.iloc[0].tolist() == ["p0", "x0", 3]
