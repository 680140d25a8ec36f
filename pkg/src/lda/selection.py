"""Choosing the number of communities by held-out perplexity."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from src.config import SelectionRule
from src.errors import EmptyNetworkError, ValidationError
from src.lda.perplexity import heldout_perplexity
from src.lda.sampler import fit
from src.models.community import (
    FoldInConfig,
    LdaConfig,
    ModelSelectionResult,
    replicate_standard_error,
)
from src.models.network import EcoNetwork
from src.utils.logger import get_logger
from src.utils.random import derive_seed, make_rng

logger = get_logger(__name__)

ProgressCallback = Callable[[int, int], None]

# substream tags
_SPLIT = 1
_FIT = 2
_FOLDIN = 3


def parse_grid(text: str) -> list[int]:
    """Parse ``"5:140"``, ``"5:140:5"`` or ``"2,3,4,6,8"`` into a list of K values."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError(text)
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1
            if step < 1 or stop < start:
                raise ValueError(text)
            grid = list(range(start, stop + 1, step))
        else:
            grid = [int(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise ValidationError(f"Invalid grid specification: {text!r}") from e
    if not grid or min(grid) < 1:
        raise ValidationError("grid must contain positive K values")
    return grid


def split_individuals(
    net: EcoNetwork,
    test_fraction: float,
    seed: int,
    replicate: int,
) -> tuple[EcoNetwork, EcoNetwork]:
    """Random individual-level train/test split for one replicate.

    The training network is compacted to the locations it visits; the test
    network keeps its full location list (unseen locations are dropped at
    scoring time).
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValidationError("test_fraction must lie in (0, 1)")
    n = net.n_individuals
    n_test = int(round(test_fraction * n))
    if n_test < 1 or n_test >= n:
        raise EmptyNetworkError(
            f"a {test_fraction:.2f} split of {n} individuals leaves an empty train or test set"
        )
    order = make_rng(seed, _SPLIT, replicate).permutation(n)
    test_rows = np.sort(order[:n_test])
    train_rows = np.sort(order[n_test:])
    return net.subset(train_rows, compact=True), net.subset(test_rows, compact=False)


@dataclass(frozen=True)
class _Cell:
    replicate: int
    column: int
    config: LdaConfig
    foldin: FoldInConfig


def _score_cell(train: EcoNetwork, test: EcoNetwork, cell: _Cell) -> tuple[int, int, float]:
    model = fit(train, cell.config, log_every=max(1, cell.config.iterations))
    value = heldout_perplexity(model, test, cell.foldin)
    logger.info(f"replicate {cell.replicate + 1}, K={cell.config.K}: perplexity {value:.3f}")
    return cell.replicate, cell.column, value


def _rule(value: SelectionRule | str) -> SelectionRule:
    try:
        return SelectionRule(value)
    except ValueError as e:
        raise ValidationError(f"Unknown selection rule: {value!r}") from e


def choose_k(
    grid: Sequence[int],
    perplexities: np.ndarray,
    rule: SelectionRule | str = SelectionRule.MINIMUM,
) -> int:
    """Pick K from a replicate x K perplexity matrix.

    ``min`` takes the lowest replicate-mean perplexity. ``one-se`` takes the
    smallest K whose mean lies within one standard error (across replicates)
    of that minimum; with a single replicate both rules agree. Ties go to the
    smaller K.
    """
    rule = _rule(rule)
    means = perplexities.mean(axis=0)
    best = means.min()
    threshold = best
    if rule is SelectionRule.ONE_SE:
        errors = replicate_standard_error(perplexities)
        threshold = best + errors[int(np.flatnonzero(means == best)[0])]
    return min(int(K) for K, m in zip(grid, means) if m <= threshold)


def select_k(
    net: EcoNetwork,
    grid: Sequence[int],
    replicates: int,
    test_fraction: float,
    base_config: LdaConfig,
    foldin: Optional[FoldInConfig] = None,
    jobs: int = 1,
    progress: Optional[ProgressCallback] = None,
    rule: SelectionRule | str = SelectionRule.MINIMUM,
) -> ModelSelectionResult:
    """Fit every K on every replicate's training set and pick K by ``rule``.

    Each (replicate, K) cell owns an independent seeded chain, so the result
    does not depend on ``jobs``. Ties go to the smaller K.
    """
    grid = [int(k) for k in grid]
    if not grid:
        raise ValidationError("grid must not be empty")
    if any(k < 1 for k in grid):
        raise ValidationError("every K in the grid must be >= 1")
    if replicates < 1:
        raise ValidationError("replicates must be >= 1")
    if jobs < 1:
        raise ValidationError("jobs must be >= 1")
    rule = _rule(rule)
    foldin = foldin or FoldInConfig(seed=base_config.seed)

    splits = [
        split_individuals(net, test_fraction, base_config.seed, r) for r in range(replicates)
    ]
    cells = [
        _Cell(
            replicate=r,
            column=c,
            config=base_config.with_k(K, seed=derive_seed(base_config.seed, _FIT, r, K)),
            foldin=FoldInConfig(
                sweeps=foldin.sweeps,
                retained=foldin.retained,
                seed=derive_seed(foldin.seed, _FOLDIN, r, K),
            ),
        )
        for r in range(replicates)
        for c, K in enumerate(grid)
    ]
    logger.info(
        f"Selecting K over {len(grid)} values x {replicates} replicates "
        f"({len(cells)} fits, jobs={jobs})"
    )

    perplexities = np.full((replicates, len(grid)), np.nan)
    done = 0
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_score_cell, *splits[cell.replicate], cell) for cell in cells
            ]
            for future in futures:
                r, c, value = future.result()
                perplexities[r, c] = value
                done += 1
                if progress:
                    progress(done, len(cells))
    else:
        for cell in cells:
            r, c, value = _score_cell(*splits[cell.replicate], cell)
            perplexities[r, c] = value
            done += 1
            if progress:
                progress(done, len(cells))

    selected = choose_k(grid, perplexities, rule)
    logger.info(
        f"Selected K={selected} by the {rule.value} rule "
        f"(mean perplexity {perplexities.mean(axis=0)[grid.index(selected)]:.3f})"
    )

    return ModelSelectionResult(
        grid=grid,
        perplexities=perplexities,
        selected_K=selected,
        test_fraction=test_fraction,
        seed=base_config.seed,
        rule=rule.value,
        test_individuals=[list(test.individuals) for _, test in splits],
    )
