"""CLI entry point for eco-communities."""

import logging
from pathlib import Path
from typing import Optional

import click
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn
from rich.table import Table

from src.config import ExportFormat, PairWeighting, SelectionRule, get_config, load_config
from src.errors import EcoCommunityError, StorageError
from src.models.regression import RegressionSpec, parse_interaction
from src.models.synth import NeighborhoodPlan, SynthSpec, TokenPlan
from src.orchestrator import (
    Pipeline,
    PipelineSettings,
    StageResult,
    WorkflowStage,
    run_export,
    run_fit,
    run_ingest,
    run_metrics,
    run_regress,
    run_select_k,
    run_simulate,
    run_synth,
)
from src.utils.logger import console, get_logger, setup_logging
from src.utils.random import MAX_SEED

logger = get_logger(__name__)

SEED = click.IntRange(0, MAX_SEED)


class EcoGroup(click.Group):
    """Click group that maps package errors to categorized exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except EcoCommunityError as e:
            console.print(f"[red]Error:[/red] {e}")
            logger.debug("Command failed", exc_info=True)
            ctx.exit(e.exit_code)
        except OSError as e:
            console.print(f"[red]I/O error:[/red] {e}")
            ctx.exit(StorageError.exit_code)


def _progress() -> Progress:
    return Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=console,
        transient=True,
    )


def _report(result: StageResult) -> None:
    """Print a stage summary panel."""
    lines = [f"[bold]{key}:[/bold] {value}" for key, value in result.summary.items()]
    lines += [f"[dim]{path}[/dim]" for path in result.outputs.values()]
    lines.append(f"[dim]{result.manifest}[/dim]")
    console.print(Panel("\n".join(lines), title=result.stage.value))


def _sampler_overrides(**values) -> dict:
    return {k: v for k, v in values.items() if v is not None}


sampler_options = [
    click.option("--alpha", type=click.FloatRange(min=0, min_open=True),
                 help="Symmetric prior on W rows (default 50/K)"),
    click.option("--beta", type=click.FloatRange(min=0, min_open=True),
                 help="Symmetric prior on H rows"),
    click.option("--iterations", type=click.IntRange(min=1), help="Total Gibbs sweeps"),
    click.option("--burn-in", "burn_in", type=click.IntRange(min=0),
                 help="Sweeps discarded before averaging"),
    click.option("--last-sweep-only/--average-sweeps", "last_sweep_only", default=None,
                 help="Use the final sweep instead of the post-burn-in average"),
    click.option("--chains", type=click.IntRange(min=1),
                 help="Independent restarts; the best-fitting chain is kept"),
]


def with_sampler_options(func):
    for option in reversed(sampler_options):
        func = option(func)
    return func


@click.group(cls=EcoGroup)
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.option("--log-file", type=click.Path(path_type=Path), help="Also log to this file")
@click.option("--config", "config_path", type=click.Path(path_type=Path),
              help="key=value configuration file")
def cli(debug: bool, log_file: Optional[Path], config_path: Optional[Path]):
    """Eco-communities - mixed-membership communities in individual x location networks."""
    setup_logging(level=logging.DEBUG if debug else logging.INFO, log_file=log_file)
    load_config(config_path)


@cli.command()
@click.option("--edges", required=True, type=click.Path(path_type=Path), help="Edge-list CSV")
@click.option("--roster", required=True, type=click.Path(path_type=Path), help="Roster CSV")
@click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory")
@click.option("--min-per-neighborhood", type=click.IntRange(min=1),
              help="Minimum residents for a neighborhood to be kept")
@click.option("--report", is_flag=True, help="Write filter_report.json")
def ingest(edges: Path, roster: Path, output: Optional[Path],
           min_per_neighborhood: Optional[int], report: bool):
    """Load, filter and describe an eco-network."""
    _report(run_ingest(
        edges, roster, output or get_config().storage.output_dir,
        min_per_neighborhood=min_per_neighborhood, report=report,
    ))


@cli.command()
@click.option("--individuals", "I", required=True, type=click.IntRange(min=1))
@click.option("--locations", "J", required=True, type=click.IntRange(min=1))
@click.option("--communities", "K", required=True, type=click.IntRange(min=1))
@click.option("--alpha-true", default=0.1, type=click.FloatRange(min=0, min_open=True))
@click.option("--beta-true", default=0.1, type=click.FloatRange(min=0, min_open=True))
@click.option("--tokens", default="10", help="Reports per individual: N or LOW:HIGH")
@click.option("--plan", type=click.Choice([p.value for p in NeighborhoodPlan
                                           if p is not NeighborhoodPlan.CUSTOM]),
              default=NeighborhoodPlan.ALIGNED.value, help="Neighborhood assignment")
@click.option("--neighborhood-size", default=10, type=click.IntRange(min=1))
@click.option("--seed", required=True, type=SEED)
@click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory")
def synth(I: int, J: int, K: int, alpha_true: float, beta_true: float, tokens: str,
          plan: str, neighborhood_size: int, seed: int, output: Optional[Path]):
    """Generate a synthetic eco-network with known communities."""
    spec = SynthSpec(
        I=I, J=J, K_true=K, alpha_true=alpha_true, beta_true=beta_true,
        tokens=TokenPlan.parse(tokens), neighborhood_plan=NeighborhoodPlan(plan),
        neighborhood_size=neighborhood_size, seed=seed,
    )
    _report(run_synth(spec, output or get_config().storage.output_dir))


@cli.command("select-k")
@click.option("--edges", required=True, type=click.Path(path_type=Path),
              help="Filtered edge list (network.csv)")
@click.option("--grid", help="K values: START:STOP[:STEP] or a comma list")
@click.option("--replicates", type=click.IntRange(min=1))
@click.option("--test-fraction", type=click.FloatRange(0, 1, min_open=True, max_open=True))
@click.option("--jobs", type=click.IntRange(min=1), help="Parallel worker processes")
@click.option("--rule", type=click.Choice([r.value for r in SelectionRule]),
              help="min: lowest mean perplexity; one-se: smallest K within one SE of it")
@click.option("--seed", required=True, type=SEED)
@click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory")
@with_sampler_options
def select_k(edges: Path, grid: Optional[str], replicates: Optional[int],
             test_fraction: Optional[float], jobs: Optional[int], rule: Optional[str],
             seed: int, output: Optional[Path], **sampler):
    """Choose K by held-out perplexity."""
    with _progress() as progress:
        task = progress.add_task("Fitting grid", total=None)

        def update(done: int, total: int) -> None:
            progress.update(task, completed=done, total=total)

        result = run_select_k(
            edges, output or get_config().storage.output_dir, seed,
            grid=grid, replicates=replicates, test_fraction=test_fraction, jobs=jobs,
            rule=rule, progress=update, **_sampler_overrides(**sampler),
        )
    _report(result)
    click.echo(f"selected_K={result.summary['selected_K']}")


@cli.command("fit")
@click.option("--edges", required=True, type=click.Path(path_type=Path),
              help="Filtered edge list (network.csv)")
@click.option("--k", "K", required=True, type=click.IntRange(min=1), help="Number of communities")
@click.option("--top", default=10, type=click.IntRange(min=1),
              help="Locations listed per community profile")
@click.option("--seed", required=True, type=SEED)
@click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory")
@with_sampler_options
def fit_command(edges: Path, K: int, top: int, seed: int, output: Optional[Path], **sampler):
    """Fit the community model with collapsed Gibbs sampling."""
    overrides = _sampler_overrides(**sampler)
    sampler_defaults = get_config().sampler
    total = overrides.get("iterations", sampler_defaults.iterations) * overrides.get(
        "chains", sampler_defaults.chains
    )
    with _progress() as progress:
        task = progress.add_task(f"Gibbs K={K}", total=total)
        result = run_fit(
            edges, output or get_config().storage.output_dir, K, seed,
            on_sweep=lambda sweep, state: progress.update(task, completed=sweep),
            top_n=top, **overrides,
        )
    _report(result)


@cli.command()
@click.option("--edges", required=True, type=click.Path(path_type=Path))
@click.option("--roster", required=True, type=click.Path(path_type=Path))
@click.option("--model", "model_path", required=True, type=click.Path(path_type=Path))
@click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory")
def metrics(edges: Path, roster: Path, model_path: Path, output: Optional[Path]):
    """Gini, modal communities and neighborhood summaries."""
    _report(run_metrics(edges, roster, model_path, output or get_config().storage.output_dir))


@cli.command()
@click.option("--model", "model_path", required=True, type=click.Path(path_type=Path))
@click.option("--n-values", help="Locations per individual: START:STOP or a comma list")
@click.option("--pairs-per-n", type=click.IntRange(min=1))
@click.option("--weighting", type=click.Choice([w.value for w in PairWeighting]))
@click.option("--n-locations", "J", type=click.IntRange(min=1),
              help="J for the analytic curve (default: the model's locations)")
@click.option("--seed", required=True, type=SEED)
@click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory")
def simulate(model_path: Path, n_values: Optional[str], pairs_per_n: Optional[int],
             weighting: Optional[str], J: Optional[int], seed: int, output: Optional[Path]):
    """Simulate shared-location probabilities within and between communities."""
    _report(run_simulate(
        model_path, output or get_config().storage.output_dir, seed,
        n_values=n_values, pairs_per_n=pairs_per_n, weighting=weighting, n_locations=J,
    ))


@cli.command()
@click.option("--summaries", required=True, type=click.Path(path_type=Path),
              help="neighborhoods.csv from the metrics command")
@click.option("--covariates", type=click.Path(path_type=Path),
              help="CSV keyed by neighborhood_id")
@click.option("--response", required=True)
@click.option("--term", "terms", multiple=True, required=True, help="Main effect (repeatable)")
@click.option("--interaction", "interactions", multiple=True, help="a:b (repeatable)")
@click.option("--no-standardize", is_flag=True, help="Fit on raw columns")
@click.option("--simple-slopes", "slopes_pair",
              help="focal:moderator conditional effects (needs that interaction)")
@click.option("--at", "slopes_at", multiple=True, type=float,
              help="Moderator values for --simple-slopes (default -1 0 1)")
@click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory")
def regress(summaries: Path, covariates: Optional[Path], response: str, terms: tuple,
            interactions: tuple, no_standardize: bool, slopes_pair: Optional[str],
            slopes_at: tuple, output: Optional[Path]):
    """Neighborhood-level standardized OLS."""
    spec = RegressionSpec(
        response=response,
        terms=list(terms),
        interactions=[parse_interaction(x) for x in interactions],
        standardize=not no_standardize,
    )
    slopes = None
    if slopes_pair:
        focal, moderator = parse_interaction(slopes_pair)
        slopes = (focal, moderator, list(slopes_at) or [-1.0, 0.0, 1.0])
    result = run_regress(
        summaries, output or get_config().storage.output_dir, spec,
        covariates_path=covariates, slopes=slopes,
    )
    _report(result)


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(path_type=Path),
              help="Result table (.csv or .json)")
@click.option("--format", "-f", "formats", multiple=True,
              type=click.Choice([f.value for f in ExportFormat]), help="Export format (repeatable)")
@click.option("--stem", help="Output file name without extension")
@click.option("--title", default="", help="Table caption")
@click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory")
def export(input_path: Path, formats: tuple, stem: Optional[str], title: str,
           output: Optional[Path]):
    """Export a result table as CSV, JSON or LaTeX."""
    _report(run_export(
        input_path, output or get_config().storage.output_dir, list(formats),
        stem=stem, title=title,
    ))


@cli.command()
@click.option("--individuals", "I", default=200, type=click.IntRange(min=1))
@click.option("--locations", "J", default=60, type=click.IntRange(min=1))
@click.option("--communities", "K", default=4, type=click.IntRange(min=1))
@click.option("--alpha-true", default=0.05, type=click.FloatRange(min=0, min_open=True))
@click.option("--beta-true", default=0.05, type=click.FloatRange(min=0, min_open=True))
@click.option("--tokens", default="5:20")
@click.option("--plan", type=click.Choice([NeighborhoodPlan.ALIGNED.value,
                                           NeighborhoodPlan.MIXED.value]),
              default=NeighborhoodPlan.MIXED.value)
@click.option("--neighborhood-size", default=10, type=click.IntRange(min=1))
@click.option("--grid", default="2:6")
@click.option("--replicates", default=3, type=click.IntRange(min=1))
@click.option("--rule", type=click.Choice([r.value for r in SelectionRule]),
              help="K selection rule (default: configured rule)")
@click.option("--n-values", default="1:20")
@click.option("--pairs-per-n", default=2000, type=click.IntRange(min=1))
@click.option("--seed", required=True, type=SEED)
@click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory")
@with_sampler_options
def pipeline(I: int, J: int, K: int, alpha_true: float, beta_true: float, tokens: str,
             plan: str, neighborhood_size: int, grid: str, replicates: int, rule: Optional[str],
             n_values: str, pairs_per_n: int, seed: int, output: Optional[Path], **sampler):
    """Run synth, ingest, select-k, fit, metrics, simulate and regress end to end."""
    spec = SynthSpec(
        I=I, J=J, K_true=K, alpha_true=alpha_true, beta_true=beta_true,
        tokens=TokenPlan.parse(tokens), neighborhood_plan=NeighborhoodPlan(plan),
        neighborhood_size=neighborhood_size, seed=seed,
    )
    settings = PipelineSettings(
        spec=spec, seed=seed, grid=grid, replicates=replicates,
        rule=SelectionRule(rule) if rule else None, n_values=n_values,
        pairs_per_n=pairs_per_n, sampler_overrides=_sampler_overrides(**sampler),
    )
    runner = Pipeline(output or get_config().storage.output_dir)

    def stage_started(stage: WorkflowStage) -> None:
        console.print(f"[cyan][{stage.value}][/cyan] running")

    runner.set_progress_callback(stage_started)
    results = runner.run(settings)
    for result in results.values():
        _report(result)


@cli.command("config")
def show_config():
    """Show current configuration."""
    table = Table(title="Configuration")
    table.add_column("Section")
    table.add_column("Key")
    table.add_column("Value")
    for section, values in get_config().to_dict().items():
        for key, value in values.items():
            table.add_row(section, key, str(value))
    Console().print(table)


@cli.command()
def version():
    """Show version information."""
    from src import __version__
    click.echo(f"eco-communities v{__version__}")


def main():
    """Main entry point."""
    cli()


if __name__ == "__main__":
    main()
