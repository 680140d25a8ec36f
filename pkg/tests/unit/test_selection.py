"""Tests for choosing K by held-out perplexity."""

import numpy as np
import pytest

from src.errors import EmptyNetworkError, ValidationError
from src.config import SelectionRule
from src.lda import choose_k, parse_grid, select_k, split_individuals
from src.lda import selection
from src.models.community import FoldInConfig, LdaConfig
from src.models.synth import NeighborhoodPlan, SynthSpec, TokenPlan
from src.synth import generate


@pytest.mark.parametrize(
    "text, expected",
    [
        ("2:6", [2, 3, 4, 5, 6]),
        ("5:20:5", [5, 10, 15, 20]),
        ("2,3,4,6,8", [2, 3, 4, 6, 8]),
        (" 7 ", [7]),
    ],
)
def test_parse_grid(text, expected):
    assert parse_grid(text) == expected


@pytest.mark.parametrize("text", ["", "a:b", "6:2", "1:5:0", "0,2", "1:2:3:4"])
def test_parse_grid_rejects(text):
    with pytest.raises(ValidationError):
        parse_grid(text)


def test_split_sizes_and_disjointness(small_network):
    train, test = split_individuals(small_network, 0.25, seed=3, replicate=0)

    assert test.n_individuals == 2
    assert train.n_individuals == 6
    assert not set(train.individuals) & set(test.individuals)
    assert np.all(train.visitors_per_location > 0)
    assert test.locations == small_network.locations


def test_split_is_reproducible_per_replicate(small_network):
    first = split_individuals(small_network, 0.5, seed=1, replicate=0)[1].individuals
    again = split_individuals(small_network, 0.5, seed=1, replicate=0)[1].individuals
    assert first == again


def test_split_that_leaves_an_empty_side(small_network):
    with pytest.raises(EmptyNetworkError):
        split_individuals(small_network, 0.01, seed=0, replicate=0)
    with pytest.raises(ValidationError):
        split_individuals(small_network, 1.0, seed=0, replicate=0)


def test_select_k_shapes(small_network):
    config = LdaConfig(K=1, alpha=0.5, iterations=20, burn_in=10, seed=5)
    calls = []
    result = select_k(
        small_network, [1, 2], replicates=2, test_fraction=0.25, base_config=config,
        foldin=FoldInConfig(sweeps=10, retained=5, seed=5),
        progress=lambda done, total: calls.append((done, total)),
    )

    assert result.perplexities.shape == (2, 2)
    assert np.all(result.perplexities >= 1.0)
    assert result.selected_K in (1, 2)
    assert calls[-1] == (4, 4)
    assert [r["K"] for r in result.to_records()] == [1, 2, 1, 2]
    assert result.to_dict()["replicates"] == 2
    assert len(result.test_individuals) == 2


def test_select_k_is_deterministic(small_network):
    config = LdaConfig(K=1, alpha=0.5, iterations=10, burn_in=5, seed=8)
    first = select_k(small_network, [1, 3], 2, 0.25, config)
    second = select_k(small_network, [1, 3], 2, 0.25, config)
    assert np.array_equal(first.perplexities, second.perplexities)


def test_ties_go_to_smaller_k(small_network, monkeypatch):
    monkeypatch.setattr(
        selection, "_score_cell", lambda train, test, cell: (cell.replicate, cell.column, 5.0)
    )
    result = select_k(small_network, [4, 2, 3], 2, 0.25, LdaConfig(K=1, iterations=2, burn_in=1))
    assert result.selected_K == 2


def test_select_k_validation(small_network):
    config = LdaConfig(K=1, iterations=2, burn_in=1)
    with pytest.raises(ValidationError):
        select_k(small_network, [], 1, 0.25, config)
    with pytest.raises(ValidationError):
        select_k(small_network, [0, 2], 1, 0.25, config)
    with pytest.raises(ValidationError):
        select_k(small_network, [2], 0, 0.25, config)


@pytest.mark.slow
def test_parallel_matches_serial(small_network):
    config = LdaConfig(K=1, alpha=0.5, iterations=10, burn_in=5, seed=2)
    serial = select_k(small_network, [1, 2], 2, 0.25, config, jobs=1)
    parallel = select_k(small_network, [1, 2], 2, 0.25, config, jobs=2)
    assert np.array_equal(serial.perplexities, parallel.perplexities)


@pytest.mark.slow
@pytest.mark.parametrize("generator_seed", [99, 2024, 5])
def test_planted_community_count_is_selected(generator_seed):
    spec = SynthSpec(
        I=200, J=60, K_true=4, alpha_true=0.01, beta_true=0.05,
        tokens=TokenPlan(low=15, high=30), neighborhood_plan=NeighborhoodPlan.ALIGNED,
        seed=generator_seed,
    )
    net, _ = generate(spec)
    config = LdaConfig(K=1, alpha=0.5, beta=0.05, iterations=200, burn_in=100, seed=13, chains=3)
    result = select_k(
        net, [2, 3, 4, 6, 8], replicates=5, test_fraction=0.1, base_config=config,
        rule=SelectionRule.ONE_SE,
    )

    assert result.selected_K == 4
    assert result.to_dict()["rule"] == "one-se"


def test_singleton_grid(small_network):
    config = LdaConfig(K=1, alpha=0.5, iterations=4, burn_in=2, seed=0)
    assert select_k(small_network, [3], 1, 0.25, config).selected_K == 3


# replicate x K perplexities for K = 2, 3, 4, 6, 8 with a plateau from K = 4
PLATEAU = np.array([
    [9.9, 7.1, 5.6, 5.5, 5.6],
    [9.8, 6.9, 5.2, 5.3, 5.2],
    [10.0, 7.0, 5.5, 5.4, 5.5],
])


def test_minimum_rule_takes_the_lowest_mean():
    assert choose_k([2, 3, 4, 6, 8], PLATEAU) == 6


def test_one_standard_error_rule_prefers_fewer_communities():
    assert choose_k([2, 3, 4, 6, 8], PLATEAU, SelectionRule.ONE_SE) == 4
    assert choose_k([2, 3, 4, 6, 8], PLATEAU, "one-se") == 4


def test_rules_agree_on_a_single_replicate():
    row = PLATEAU[1:2]
    assert choose_k([2, 3, 4, 6, 8], row, "one-se") == choose_k([2, 3, 4, 6, 8], row) == 4


def test_unknown_rule():
    with pytest.raises(ValidationError):
        choose_k([2, 3], np.ones((2, 2)), "elbow")


def test_selection_summary_reports_standard_errors(small_network, monkeypatch):
    monkeypatch.setattr(
        selection, "_score_cell",
        lambda train, test, cell: (cell.replicate, cell.column, 4.0 + cell.replicate),
    )
    result = select_k(
        small_network, [1, 2], 2, 0.25, LdaConfig(K=1, iterations=2, burn_in=1), rule="one-se"
    )
    summary = result.to_dict()

    assert summary["rule"] == "one-se"
    assert summary["standard_error"] == {"1": pytest.approx(0.5), "2": pytest.approx(0.5)}
    assert result.selected_K == 1
