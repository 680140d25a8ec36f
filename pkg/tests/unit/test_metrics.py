"""Tests for attachment and neighborhood-consistency metrics."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from src.analysis import (
    community_sizes,
    describe,
    gini,
    individual_metrics,
    modal_community,
    summarize_neighborhoods,
    total_variation,
)
from src.errors import DomainError, InsufficientSampleError, ValidationError
from src.models.community import CommunityModel, LdaConfig
from src.models.network import EcoNetwork
from src.models.summary import NeighborhoodSummary

positive_rows = st.integers(min_value=2, max_value=8).flatmap(
    lambda K: arrays(
        np.float64,
        st.tuples(st.integers(min_value=2, max_value=10), st.just(K)),
        elements=st.floats(min_value=0.01, max_value=1.0),
    )
)


def _brute_gini(w: np.ndarray) -> float:
    K = w.size
    return float(np.abs(w[:, None] - w[None, :]).sum() / (2 * K * w.sum()))


def _brute_total_variation(X: np.ndarray) -> float:
    logs = np.log(X)
    K = X.shape[1]
    total = sum(
        np.var(logs[:, k] - logs[:, l], ddof=1) for k in range(K) for l in range(K)
    )
    return float(total / (2 * K))


def _model(W, individuals) -> CommunityModel:
    W = np.asarray(W, dtype=np.float64)
    K = W.shape[1]
    return CommunityModel(
        LdaConfig(K=K), W=W, H=np.full((K, 2), 0.5), individuals=individuals, locations=["x", "y"]
    )


@pytest.mark.parametrize("K", [1, 2, 5, 20])
def test_gini_extremes(K):
    assert gini(np.full(K, 1.0 / K)) == pytest.approx(0.0, abs=1e-12)
    one_hot = np.zeros(K)
    one_hot[0] = 1.0
    assert gini(one_hot) == pytest.approx(1 - 1 / K, abs=1e-15)


def test_gini_matches_pairwise_oracle():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        w = rng.dirichlet(np.ones(rng.integers(2, 12)))
        assert gini(w) == pytest.approx(_brute_gini(w), abs=1e-12)


@given(arrays(np.float64, st.integers(2, 10), elements=st.floats(0.001, 1.0)), st.randoms())
def test_gini_is_permutation_invariant(w, random):
    order = list(range(w.size))
    random.shuffle(order)
    assert gini(w[order]) == pytest.approx(gini(w), abs=1e-12)


def test_gini_grows_when_mass_moves_to_larger_entry():
    rng = np.random.default_rng(1)
    for _ in range(100):
        w = rng.dirichlet(np.ones(5))
        small, large = np.argmin(w), np.argmax(w)
        moved = w.copy()
        delta = w[small] / 2
        moved[small] -= delta
        moved[large] += delta
        assert gini(moved) > gini(w)


@pytest.mark.parametrize("w", [[0.5, -0.1, 0.6], [0.0, 0.0], []])
def test_gini_rejects(w):
    with pytest.raises(ValidationError):
        gini(w)


def test_modal_community_ties_to_lowest_index():
    assert modal_community([0.2, 0.4, 0.4]) == 1
    assert modal_community([0.9, 0.1]) == 0


def test_total_variation_hand_case():
    e = math.e
    rows = np.array([[0.5, 0.5], [e / (1 + e), 1 / (1 + e)]])
    assert total_variation(rows) == pytest.approx(0.25, abs=1e-12)


def test_total_variation_identical_rows():
    rows = np.tile([0.2, 0.3, 0.5], (4, 1))
    assert total_variation(rows) == pytest.approx(0.0, abs=1e-12)


@given(positive_rows)
def test_total_variation_matches_pairwise_oracle(X):
    assert total_variation(X) == pytest.approx(_brute_total_variation(X), rel=1e-9, abs=1e-10)


def test_total_variation_invariances():
    rng = np.random.default_rng(2)
    for _ in range(100):
        K = int(rng.integers(2, 7))
        X = rng.dirichlet(np.ones(K), size=int(rng.integers(2, 9)))
        base = total_variation(X)

        permuted = X[:, rng.permutation(K)]
        assert total_variation(permuted) == pytest.approx(base, abs=1e-10)

        shifted = X * rng.uniform(0.1, 10.0, size=K)
        shifted /= shifted.sum(axis=1, keepdims=True)
        assert total_variation(shifted) == pytest.approx(base, abs=1e-10)


def test_total_variation_domain():
    with pytest.raises(InsufficientSampleError):
        total_variation(np.array([[0.5, 0.5]]))
    with pytest.raises(DomainError):
        total_variation(np.array([[1.0, 0.0], [0.5, 0.5]]))


def test_individual_metrics():
    net = EcoNetwork.from_dense(
        [[2, 1], [0, 3]], individuals=["a", "b"], locations=["x", "y"], neighborhoods=["n", "n"]
    )
    metrics = individual_metrics(net, _model([[0.8, 0.2], [0.3, 0.7]], ["a", "b"]))

    assert [m.modal_community for m in metrics] == [0, 1]
    assert metrics[0].modal_probability == pytest.approx(0.8)
    assert metrics[0].gini == pytest.approx(0.3)
    assert [m.n_locations for m in metrics] == [3, 3]
    assert metrics[1].to_dict()["modal_community"] == 2


def test_individual_metrics_needs_matching_individuals():
    net = EcoNetwork.from_dense([[1, 1]], individuals=["a"], locations=["x", "y"])
    with pytest.raises(ValidationError):
        individual_metrics(net, _model([[0.5, 0.5]], ["b"]))


def test_summarize_neighborhoods():
    net = EcoNetwork.from_dense(
        np.ones((5, 2), dtype=int),
        individuals=["a", "b", "c", "d", "e"],
        locations=["x", "y"],
        neighborhoods=["n1", "n1", "n1", "n2", "n2"],
    )
    W = [[0.9, 0.1], [0.8, 0.2], [0.3, 0.7], [0.6, 0.4], [0.7, 0.3]]
    summaries = summarize_neighborhoods(net, _model(W, net.individuals))

    first, second = summaries
    assert first.neighborhood == "n1"
    assert first.n_individuals == 3
    assert first.share_modal == pytest.approx(1 / 3)
    assert first.share_largest_modal == pytest.approx(2 / 3)
    assert first.n_modal_communities == 2
    assert first.mean_n_locations == pytest.approx(2.0)
    assert first.total_variation == pytest.approx(_brute_total_variation(np.array(W[:3])))
    assert second.share_modal == 1.0
    assert second.n_modal_communities == 1


def test_singleton_neighborhood_is_flagged():
    net = EcoNetwork.from_dense(
        [[1, 1], [1, 1]], individuals=["a", "b"], locations=["x", "y"], neighborhoods=["n1", "n2"]
    )
    summaries = summarize_neighborhoods(net, _model([[0.6, 0.4], [0.1, 0.9]], ["a", "b"]))

    assert all(s.singleton for s in summaries)
    assert all(s.share_modal == 1.0 for s in summaries)
    assert all(s.total_variation is None for s in summaries)
    assert NeighborhoodSummary.from_dict(summaries[0].to_dict()) == summaries[0]


def test_community_sizes():
    sizes = community_sizes(_model([[0.9, 0.1], [0.6, 0.4], [0.2, 0.8]], ["a", "b", "c"]))

    assert [s.n_modal for s in sizes] == [2, 1]
    assert [s.expected_size for s in sizes] == pytest.approx([1.7, 1.3])


def test_describe():
    summary = describe([1.0, 2.0, 3.0, 4.0, float("nan")], "mean_gini")

    assert summary.n == 4
    assert (summary.minimum, summary.maximum) == (1.0, 4.0)
    assert summary.q1 == pytest.approx(1.75)
    assert summary.median == pytest.approx(2.5)
    assert summary.q3 == pytest.approx(3.25)
    assert summary.variance == pytest.approx(5 / 3)
    assert describe([2.0]).variance is None
    with pytest.raises(ValidationError):
        describe([])
