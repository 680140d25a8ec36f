"""Orchestrator - file-level stages and the end-to-end pipeline.

Each stage reads its inputs, writes its outputs into one directory through a
FileManager and finishes with a ``manifest-<command>.json``. The CLI calls one
stage per subcommand; ``Pipeline`` chains them.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import pandas as pd

from src import __version__
from src.analysis import (
    build_neighborhood_table,
    community_sizes,
    describe,
    individual_metrics,
    interaction_fit,
    load_covariates,
    ols_fit,
    simple_slopes,
    simulate_share_curve,
    summarize_neighborhoods,
)
from src.config import Config, ExportFormat, PairWeighting, SelectionRule, get_config
from src.econet import (
    apply_filters,
    load_edgelist,
    load_roster,
    location_popularity,
    roster_frame,
)
from src.errors import ValidationError
from src.export import get_exporter
from src.lda import fit, parse_grid, select_k, top_locations
from src.lda.sampler import SweepCallback
from src.models.community import FoldInConfig, LdaConfig
from src.models.manifest import RunManifest
from src.models.network import EcoNetwork
from src.models.regression import RegressionSpec
from src.models.summary import NeighborhoodSummary
from src.models.synth import SynthSpec
from src.storage.file_manager import (
    FileManager,
    input_record,
    load_csv,
    load_json,
    load_model,
)
from src.synth import generate
from src.utils.logger import get_logger

logger = get_logger(__name__)

ProgressCallback = Callable[[int, int], None]


class WorkflowStage(str, Enum):
    """Stages of the analysis workflow, in pipeline order."""
    SYNTH = "synth"
    INGEST = "ingest"
    SELECT_K = "select-k"
    FIT = "fit"
    METRICS = "metrics"
    SIMULATE = "simulate"
    REGRESS = "regress"
    EXPORT = "export"


@dataclass
class StageResult:
    """Outputs of one stage and a few values worth echoing to the user."""
    stage: WorkflowStage
    manifest: Path
    outputs: dict[str, Path] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)


class _StageRun:
    """FileManager plus the manifest under construction for one stage."""

    def __init__(
        self,
        stage: WorkflowStage,
        output_dir: Path,
        config: Config,
        inputs: Sequence[Path] = (),
        parameters: Optional[dict] = None,
        seeds: Optional[dict[str, int]] = None,
    ):
        self.stage = stage
        self.files = FileManager(output_dir)
        self.outputs: dict[str, Path] = {}
        self.manifest = RunManifest(
            command=stage.value,
            tool_version=__version__,
            inputs=[input_record(Path(p)) for p in inputs],
            config=config.to_dict(),
            parameters=parameters or {},
            seeds=seeds or {},
        )
        logger.info(f"[{stage.value}] writing to {self.files.base_dir}")

    def frame(self, key: str, filename: str, frame: pd.DataFrame) -> None:
        self.outputs[key] = self.files.save_frame(filename, frame)

    def json(self, key: str, filename: str, data: Any) -> None:
        self.outputs[key] = self.files.save_json(filename, data)

    def finish(self, **summary: Any) -> StageResult:
        manifest = self.files.write_manifest(self.manifest)
        return StageResult(self.stage, manifest, dict(self.outputs), summary)


def _network_for_model(edges: Path, roster: Optional[Path], individuals: Sequence[str]) -> EcoNetwork:
    """Load ``edges`` and order its rows like a model's individuals."""
    net = load_edgelist(edges, roster=load_roster(roster) if roster else None)
    index = {ind: i for i, ind in enumerate(net.individuals)}
    missing = [ind for ind in individuals if ind not in index]
    if missing:
        raise ValidationError(
            f"{len(missing)} model individuals are not in {edges} (first: {missing[0]!r})"
        )
    return net.subset([index[ind] for ind in individuals], compact=False)


def run_synth(spec: SynthSpec, output_dir: Path, config: Optional[Config] = None) -> StageResult:
    """Write ``edges.csv``, ``roster.csv`` and ``truth.json`` for a synthetic city."""
    config = config or get_config()
    run = _StageRun(
        WorkflowStage.SYNTH, output_dir, config,
        parameters=spec.to_dict(), seeds={"seed": spec.seed},
    )
    net, truth = generate(spec)
    run.frame("edges", "edges.csv", net.to_frame())
    run.frame("roster", "roster.csv", roster_frame(net))
    run.json("truth", "truth.json", {"spec": spec.to_dict(), **truth.to_dict()})
    return run.finish(
        individuals=net.n_individuals, locations=net.n_locations, reports=net.total_tokens
    )


def run_ingest(
    edges: Path,
    roster: Path,
    output_dir: Path,
    min_per_neighborhood: Optional[int] = None,
    report: bool = False,
    config: Optional[Config] = None,
) -> StageResult:
    """Load, filter and describe a network; writes ``network.csv`` and its roster."""
    config = config or get_config()
    minimum = (
        min_per_neighborhood
        if min_per_neighborhood is not None
        else config.filters.min_per_neighborhood
    )
    run = _StageRun(
        WorkflowStage.INGEST, output_dir, config,
        inputs=[edges, roster], parameters={"min_per_neighborhood": minimum},
    )
    people = load_roster(roster)
    net = load_edgelist(edges, roster=people)
    filtered, filter_report = apply_filters(net, people, minimum)
    run.frame("network", "network.csv", filtered.to_frame())
    run.frame("roster", "network_roster.csv", roster_frame(filtered))
    run.frame("popularity", "location_popularity.csv", location_popularity(filtered))
    if report:
        run.json("report", "filter_report.json", filter_report.to_dict())
    return run.finish(
        kept=filter_report.kept,
        dropped=filter_report.total_dropped,
        locations=filtered.n_locations,
    )


def _lda_config(config: Config, K: int, seed: int, **overrides: Any) -> LdaConfig:
    sampler = config.sampler
    values = {
        "alpha": sampler.alpha,
        "beta": sampler.beta,
        "iterations": sampler.iterations,
        "burn_in": sampler.burn_in,
        "last_sweep_only": sampler.last_sweep_only,
        "chains": sampler.chains,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "burn_in" not in overrides and values["burn_in"] >= values["iterations"]:
        values["burn_in"] = values["iterations"] // 2
        logger.warning(
            f"burn_in defaults to half of iterations ({values['burn_in']}) for this run"
        )
    return LdaConfig(K=K, seed=seed, **values)


def run_select_k(
    edges: Path,
    output_dir: Path,
    seed: int,
    grid: Optional[str] = None,
    replicates: Optional[int] = None,
    test_fraction: Optional[float] = None,
    jobs: Optional[int] = None,
    rule: Optional[SelectionRule | str] = None,
    config: Optional[Config] = None,
    progress: Optional[ProgressCallback] = None,
    **sampler_overrides: Any,
) -> StageResult:
    """Held-out perplexity over a K grid; writes ``perplexity.csv`` and ``selection.json``."""
    config = config or get_config()
    selection = config.selection
    grid_text = grid or selection.grid
    replicates = replicates if replicates is not None else selection.replicates
    test_fraction = test_fraction if test_fraction is not None else selection.test_fraction
    jobs = jobs if jobs is not None else selection.jobs
    rule = SelectionRule(rule or selection.rule)
    K_values = parse_grid(grid_text)
    base = _lda_config(config, K_values[0], seed, **sampler_overrides)
    run = _StageRun(
        WorkflowStage.SELECT_K, output_dir, config, inputs=[edges],
        parameters={
            "grid": grid_text, "replicates": replicates, "test_fraction": test_fraction,
            "jobs": jobs, "rule": rule.value, "sampler": base.to_dict(),
        },
        seeds={"seed": seed},
    )
    net = load_edgelist(edges)
    net.check_invariants()
    result = select_k(
        net, K_values, replicates, test_fraction, base,
        foldin=FoldInConfig(
            sweeps=config.sampler.foldin_sweeps,
            retained=config.sampler.foldin_retained,
            seed=seed,
        ),
        jobs=jobs,
        progress=progress,
        rule=rule,
    )
    run.frame("perplexity", "perplexity.csv", pd.DataFrame(result.to_records()))
    run.json("selection", "selection.json", result.to_dict())
    return run.finish(selected_K=result.selected_K)


def run_fit(
    edges: Path,
    output_dir: Path,
    K: int,
    seed: int,
    config: Optional[Config] = None,
    on_sweep: Optional[SweepCallback] = None,
    top_n: int = 10,
    **sampler_overrides: Any,
) -> StageResult:
    """Fit one model; writes ``model.json`` and ``profiles.csv``."""
    config = config or get_config()
    lda_config = _lda_config(config, K, seed, **sampler_overrides)
    run = _StageRun(
        WorkflowStage.FIT, output_dir, config, inputs=[edges],
        parameters={"lda": lda_config.to_dict(), "top_n": top_n}, seeds={"seed": seed},
    )
    net = load_edgelist(edges)
    net.check_invariants()
    model = fit(net, lda_config, on_sweep=on_sweep, log_every=config.sampler.log_every)
    run.outputs["model"] = run.files.save_model(model)
    run.frame("profiles", "profiles.csv", pd.DataFrame(top_locations(model, top_n)))
    return run.finish(K=model.K, individuals=model.n_individuals, locations=model.n_locations)


def run_metrics(
    edges: Path,
    roster: Path,
    model_path: Path,
    output_dir: Path,
    config: Optional[Config] = None,
) -> StageResult:
    """Per-individual and per-neighborhood metrics for a fitted model."""
    config = config or get_config()
    run = _StageRun(
        WorkflowStage.METRICS, output_dir, config, inputs=[edges, roster, model_path]
    )
    model = load_model(model_path)
    net = _network_for_model(edges, roster, model.individuals)
    summaries = summarize_neighborhoods(net, model)

    run.frame(
        "individuals", "individuals.csv",
        pd.DataFrame([m.to_dict() for m in individual_metrics(net, model)]),
    )
    run.frame("neighborhoods", "neighborhoods.csv", pd.DataFrame([s.to_dict() for s in summaries]))
    run.frame(
        "community_sizes", "community_sizes.csv",
        pd.DataFrame([c.to_dict() for c in community_sizes(model)]),
    )
    distribution = [
        describe([getattr(s, name) for s in summaries], name).to_dict()
        for name in ("share_modal", "share_largest_modal", "n_modal_communities", "mean_gini")
    ]
    run.frame("distribution", "neighborhood_distribution.csv", pd.DataFrame(distribution))
    return run.finish(neighborhoods=len(summaries), individuals=net.n_individuals)


def run_simulate(
    model_path: Path,
    output_dir: Path,
    seed: int,
    n_values: Optional[str] = None,
    pairs_per_n: Optional[int] = None,
    weighting: Optional[PairWeighting | str] = None,
    n_locations: Optional[int] = None,
    config: Optional[Config] = None,
) -> StageResult:
    """Share-probability curves; writes ``share_curve.csv``."""
    config = config or get_config()
    sim = config.simulation
    n_text = n_values or sim.n_values
    pairs = pairs_per_n if pairs_per_n is not None else sim.pairs_per_n
    weighting = PairWeighting(weighting or sim.weighting)
    run = _StageRun(
        WorkflowStage.SIMULATE, output_dir, config, inputs=[model_path],
        parameters={
            "n_values": n_text, "pairs_per_n": pairs,
            "weighting": weighting.value, "n_locations": n_locations,
        },
        seeds={"seed": seed},
    )
    model = load_model(model_path)
    curve = simulate_share_curve(
        model, parse_grid(n_text), pairs, seed, weighting=weighting, n_locations=n_locations
    )
    run.frame("share_curve", "share_curve.csv", curve.to_frame())
    return run.finish(n_values=len(curve.n_values), analytic_J=curve.n_locations)


def run_regress(
    summaries_path: Path,
    output_dir: Path,
    spec: RegressionSpec,
    covariates_path: Optional[Path] = None,
    slopes: Optional[tuple[str, str, Sequence[float]]] = None,
    config: Optional[Config] = None,
) -> StageResult:
    """Neighborhood-level OLS; writes ``regression.csv`` and ``regression.json``."""
    config = config or get_config()
    inputs = [summaries_path] + ([covariates_path] if covariates_path else [])
    run = _StageRun(
        WorkflowStage.REGRESS, output_dir, config, inputs=inputs,
        parameters={"spec": spec.to_dict(), "simple_slopes": list(slopes) if slopes else None},
    )
    raw = load_csv(summaries_path, dtype={"neighborhood_id": str})
    summaries = [NeighborhoodSummary.from_dict(row) for row in raw.to_dict(orient="records")]
    covariates = load_covariates(covariates_path) if covariates_path else None
    table = build_neighborhood_table(summaries, covariates)

    fitter = interaction_fit if len(spec.interactions) == 1 else ols_fit
    result = fitter(table, spec)
    run.frame("table", "neighborhood_table.csv", table)
    run.frame("regression", "regression.csv", pd.DataFrame(result.to_records()))
    run.json("regression_json", "regression.json", result.to_dict())
    if slopes:
        focal, moderator, at = slopes
        rows = [s.to_dict() for s in simple_slopes(result, focal, moderator, at)]
        run.frame("slopes", "simple_slopes.csv", pd.DataFrame(rows))
    return run.finish(n=result.n, r_squared=result.r_squared)


def _read_table(path: Path) -> pd.DataFrame:
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = load_json(path)
        if isinstance(data, dict) and "coefficients" in data:
            data = data["coefficients"]
        if not isinstance(data, list):
            raise ValidationError(f"{path} does not hold a table")
        return pd.DataFrame(data)
    if path.suffix.lower() == ".csv":
        return load_csv(path)
    raise ValidationError(f"Cannot export {path}: expected a .csv or .json table")


def run_export(
    input_path: Path,
    output_dir: Path,
    formats: Sequence[ExportFormat | str],
    stem: Optional[str] = None,
    title: str = "",
    config: Optional[Config] = None,
) -> StageResult:
    """Convert a result table into the requested formats."""
    config = config or get_config()
    formats = [ExportFormat(f) for f in formats] or [ExportFormat.CSV]
    run = _StageRun(
        WorkflowStage.EXPORT, output_dir, config, inputs=[input_path],
        parameters={"formats": [f.value for f in formats], "title": title},
    )
    table = _read_table(input_path)
    stem = stem or f"{Path(input_path).stem}_export"
    for fmt in formats:
        run.outputs[fmt.value] = get_exporter(fmt).export(table, run.files, stem, title)
    return run.finish(rows=len(table))


@dataclass
class PipelineSettings:
    """Inputs of an end-to-end run on a synthetic city."""
    spec: SynthSpec
    seed: int
    grid: str = "2:6"
    replicates: int = 3
    test_fraction: float = 0.1
    rule: Optional[SelectionRule] = None
    n_values: str = "1:20"
    pairs_per_n: int = 2000
    response: str = "mean_gini"
    terms: tuple[str, ...] = ("mean_n_locations", "n_modal_communities")
    sampler_overrides: dict[str, Any] = field(default_factory=dict)


class Pipeline:
    """Runs synth, ingest, select-k, fit, metrics, simulate and regress in one directory."""

    def __init__(self, output_dir: Path, config: Optional[Config] = None):
        self.output_dir = Path(output_dir)
        self.config = config or get_config()
        self._progress_callback: Optional[Callable[[WorkflowStage], None]] = None

    def set_progress_callback(self, callback: Callable[[WorkflowStage], None]) -> None:
        """Set a callback called at the start of every stage."""
        self._progress_callback = callback

    def _report(self, stage: WorkflowStage) -> None:
        if self._progress_callback:
            self._progress_callback(stage)
        logger.info(f"Pipeline stage: {stage.value}")

    def run(self, settings: PipelineSettings) -> dict[WorkflowStage, StageResult]:
        out = self.output_dir
        results: dict[WorkflowStage, StageResult] = {}

        self._report(WorkflowStage.SYNTH)
        synth = results[WorkflowStage.SYNTH] = run_synth(settings.spec, out, self.config)

        self._report(WorkflowStage.INGEST)
        ingest = results[WorkflowStage.INGEST] = run_ingest(
            synth.outputs["edges"], synth.outputs["roster"], out, report=True, config=self.config
        )
        network = ingest.outputs["network"]

        self._report(WorkflowStage.SELECT_K)
        selection = results[WorkflowStage.SELECT_K] = run_select_k(
            network, out, settings.seed,
            grid=settings.grid,
            replicates=settings.replicates,
            test_fraction=settings.test_fraction,
            rule=settings.rule,
            config=self.config,
            **settings.sampler_overrides,
        )

        self._report(WorkflowStage.FIT)
        fitted = results[WorkflowStage.FIT] = run_fit(
            network, out, selection.summary["selected_K"], settings.seed,
            config=self.config, **settings.sampler_overrides,
        )

        self._report(WorkflowStage.METRICS)
        metrics = results[WorkflowStage.METRICS] = run_metrics(
            network, ingest.outputs["roster"], fitted.outputs["model"], out, self.config
        )

        self._report(WorkflowStage.SIMULATE)
        results[WorkflowStage.SIMULATE] = run_simulate(
            fitted.outputs["model"], out, settings.seed,
            n_values=settings.n_values,
            pairs_per_n=settings.pairs_per_n,
            config=self.config,
        )

        self._report(WorkflowStage.REGRESS)
        results[WorkflowStage.REGRESS] = run_regress(
            metrics.outputs["neighborhoods"], out,
            RegressionSpec(response=settings.response, terms=list(settings.terms)),
            config=self.config,
        )
        return results
