"""End-to-end tests of the command-line interface."""

import json

import pandas as pd
import pytest
from click.testing import CliRunner

from src.main import cli
from src.storage import load_manifest, sha256

NEIGHBORHOOD_HEADER = (
    "neighborhood_id,n_individuals,mean_gini,mean_n_locations,share_modal,"
    "share_largest_modal,n_modal_communities,total_variation,singleton\n"
)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _invoke(runner: CliRunner, *args: str):
    return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)


@pytest.fixture
def city(tmp_path, runner):
    """A synthetic city written by the synth command and filtered by ingest."""
    out = tmp_path / "city"
    result = _invoke(
        runner, "synth", "--individuals", 40, "--locations", 20, "--communities", 2,
        "--tokens", "5:10", "--plan", "mixed", "--neighborhood-size", 5, "--seed", 3, "-o", out,
    )
    assert result.exit_code == 0, result.output
    result = _invoke(
        runner, "ingest", "--edges", out / "edges.csv", "--roster", out / "roster.csv",
        "--report", "-o", out,
    )
    assert result.exit_code == 0, result.output
    return out


def test_version(runner):
    result = _invoke(runner, "version")
    assert result.exit_code == 0
    assert "eco-communities v" in result.output


def test_synth_and_ingest_outputs(city):
    for name in ("edges.csv", "roster.csv", "truth.json", "network.csv",
                 "network_roster.csv", "location_popularity.csv", "filter_report.json"):
        assert (city / name).exists(), name

    manifest = load_manifest(city / "manifest-ingest.json")
    assert manifest.command == "ingest"
    assert manifest.output_hashes()["network.csv"] == sha256(city / "network.csv")
    assert [record.sha256 for record in manifest.inputs] == [
        sha256(city / "edges.csv"), sha256(city / "roster.csv")
    ]
    truth = json.loads((city / "truth.json").read_text(encoding="utf-8"))
    assert set(truth["labels"]) <= {1, 2}


def test_full_command_chain(city, runner):
    network, roster = city / "network.csv", city / "network_roster.csv"

    result = _invoke(
        runner, "fit", "--edges", network, "--k", 2, "--iterations", 20, "--burn-in", 10,
        "--alpha", 0.5, "--seed", 7, "-o", city,
    )
    assert result.exit_code == 0, result.output
    model = json.loads((city / "model.json").read_text(encoding="utf-8"))
    assert model["config"]["K"] == 2
    assert model["config"]["seed"] == 7
    profiles = pd.read_csv(city / "profiles.csv")
    assert set(profiles["community"]) == {1, 2}

    result = _invoke(
        runner, "metrics", "--edges", network, "--roster", roster,
        "--model", city / "model.json", "-o", city,
    )
    assert result.exit_code == 0, result.output
    individuals = pd.read_csv(city / "individuals.csv")
    assert set(individuals["modal_community"]) <= {1, 2}
    assert individuals["gini"].between(0, 0.5).all()

    result = _invoke(
        runner, "simulate", "--model", city / "model.json", "--n-values", "1:3",
        "--pairs-per-n", 100, "--seed", 1, "-o", city,
    )
    assert result.exit_code == 0, result.output
    curve = pd.read_csv(city / "share_curve.csv")
    assert set(curve["series"]) <= {"within", "between", "analytic"}

    result = _invoke(
        runner, "regress", "--summaries", city / "neighborhoods.csv",
        "--response", "mean_gini", "--term", "mean_n_locations", "-o", city,
    )
    assert result.exit_code == 0, result.output
    coefficients = pd.read_csv(city / "regression.csv")
    assert coefficients["term"].tolist() == ["(Intercept)", "mean_n_locations"]

    result = _invoke(
        runner, "export", "--input", city / "regression.csv", "-f", "latex", "-f", "json",
        "--stem", "table4", "-o", city,
    )
    assert result.exit_code == 0, result.output
    assert "\\toprule" in (city / "table4.tex").read_text(encoding="utf-8")
    assert (city / "table4.json").exists()


def test_fit_is_reproducible(city, runner, tmp_path):
    hashes = []
    for name in ("first", "second"):
        out = tmp_path / name
        result = _invoke(
            runner, "fit", "--edges", city / "network.csv", "--k", 3, "--iterations", 12,
            "--seed", 11, "-o", out,
        )
        assert result.exit_code == 0, result.output
        hashes.append(load_manifest(out / "manifest-fit.json").output_hashes())
    assert hashes[0] == hashes[1]


def test_select_k_prints_the_choice(city, runner):
    result = _invoke(
        runner, "select-k", "--edges", city / "network.csv", "--grid", "1,2",
        "--replicates", 1, "--iterations", 10, "--burn-in", 5, "--seed", 2, "-o", city,
    )
    assert result.exit_code == 0, result.output
    assert "selected_K=" in result.output
    perplexity = pd.read_csv(city / "perplexity.csv")
    assert list(perplexity.columns) == ["replicate", "K", "perplexity"]
    assert len(perplexity) == 2


def test_config_file_sets_defaults(city, runner, tmp_path):
    settings = tmp_path / "eco.env"
    settings.write_text("iterations=6\nburn_in=3\n", encoding="utf-8")
    out = tmp_path / "configured"

    result = _invoke(
        runner, "--config", settings, "fit", "--edges", city / "network.csv", "--k", 2,
        "--seed", 1, "-o", out,
    )
    assert result.exit_code == 0, result.output
    manifest = load_manifest(out / "manifest-fit.json")
    assert manifest.parameters["lda"]["iterations"] == 6
    assert manifest.config["sampler"]["burn_in"] == 3


def test_seed_is_required(city, runner):
    result = runner.invoke(cli, ["fit", "--edges", str(city / "network.csv"), "--k", "2"])
    assert result.exit_code == 2
    assert "--seed" in result.output


def test_empty_edge_list_exits_2(runner, write_csv, tmp_path):
    edges = write_csv("edges.csv", "individual_id,location_id,count\n")
    result = _invoke(runner, "fit", "--edges", edges, "--k", 2, "--seed", 1, "-o", tmp_path)
    assert result.exit_code == 2


def test_parse_error_exits_2(runner, write_csv, tmp_path):
    edges = write_csv("edges.csv", "individual_id,location_id,count\na,x,lots\n")
    result = _invoke(runner, "fit", "--edges", edges, "--k", 2, "--seed", 1, "-o", tmp_path)
    assert result.exit_code == 2


@pytest.mark.parametrize("command", ["regress", "export"])
def test_malformed_table_exits_2(runner, write_csv, tmp_path, command):
    table = write_csv(
        "table.csv", NEIGHBORHOOD_HEADER + "n1,4,0.30\nn2,5,0.40,6.0,0.4,0.60,2,0.20,False,9,9\n"
    )
    if command == "regress":
        args = ["--summaries", table, "--response", "mean_gini", "--term", "mean_n_locations"]
    else:
        args = ["--input", table]
    result = _invoke(runner, command, *args, "-o", tmp_path)
    assert result.exit_code == 2


def test_too_few_neighborhoods_exits_3(runner, write_csv, tmp_path):
    summaries = write_csv(
        "neighborhoods.csv",
        NEIGHBORHOOD_HEADER
        + "n1,4,0.30,5.0,0.5,0.75,2,0.10,False\n"
        + "n2,5,0.40,6.0,0.4,0.60,2,0.20,False\n",
    )
    result = _invoke(
        runner, "regress", "--summaries", summaries, "--response", "mean_gini",
        "--term", "mean_n_locations", "-o", tmp_path,
    )
    assert result.exit_code == 3


def test_missing_input_exits_4(runner, tmp_path):
    result = _invoke(
        runner, "fit", "--edges", tmp_path / "absent.csv", "--k", 2, "--seed", 1, "-o", tmp_path
    )
    assert result.exit_code == 4


def test_missing_model_exits_4(city, runner):
    result = _invoke(
        runner, "simulate", "--model", city / "absent.json", "--seed", 1, "-o", city
    )
    assert result.exit_code == 4
