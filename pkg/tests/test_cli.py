import json
import tomllib

import pytest
from click.testing import CliRunner

from graphspec_cli._version import __version__
from graphspec_cli.main import cli

pytestmark = pytest.mark.integration


@pytest.fixture
def runner():
    return CliRunner()


def run_report(runner, args, path="out.json", exit_code=0):
    result = runner.invoke(cli, [*args, "-o", path])
    assert result.exit_code == exit_code, result.output
    with open(path) as f:
        return json.load(f)


def write_graph(path, edges, n):
    data = {
        "vertices": [{"id": i, "m": 1.0, "c": 0.0} for i in range(n)],
        "edges": [{"u": u, "v": v, "b": b} for u, v, b in edges],
    }
    with open(path, "w") as f:
        json.dump(data, f)


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_help_lists_commands(runner):
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for name in ("info", "metric", "growth", "spectra", "cheeger", "heatcheck", "curvature", "generate"):
        assert name in result.output


class TestInfo:
    def test_family_window(self, runner, workdir):
        report = run_report(runner, ["info", "tree:d=3,R=2"])
        results = report["results"]
        assert results["vertices"] == 10
        assert results["edges"] == 9
        assert results["has_boundary"] is True
        assert results["bipartite"] is True
        assert report["provenance"]["vertices"] == "graph-core.WeightedGraph"
        assert report["header"]["config"]["radius"] == 2

    def test_graph_file(self, runner, workdir):
        write_graph("p3.json", [(0, 1, 1.0), (1, 2, 2.0)], 3)
        results = run_report(runner, ["info", "p3.json"])["results"]
        assert results["vertices"] == 3
        assert results["violations"] == []
        assert results["normalizing_measure"] == {"min": 1.0, "max": 3.0}

    def test_report_to_stdout(self, runner, workdir):
        result = runner.invoke(cli, ["info", "edge"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["results"]["vertices"] == 2

    def test_malformed_graph_exits_one(self, runner, workdir):
        write_graph("loop.json", [(1, 1, 1.0)], 2)
        result = runner.invoke(cli, ["info", "loop.json"])
        assert result.exit_code == 1
        assert "edge record 0 (u=1, v=1): self-loop" in result.output

    def test_invalid_graph_is_reported_then_exits_one(self, runner, workdir):
        write_graph("bad.json", [(0, 1, -1.0)], 3)
        report = run_report(runner, ["info", "bad.json"], exit_code=1)
        violations = report["results"]["violations"]
        assert any(v.startswith("edge-positivity at edge 0-1") for v in violations)
        assert any(v.startswith("isolated-vertex at vertex 2") for v in violations)

    @pytest.mark.parametrize("command", ["spectra", "cheeger", "heatcheck", "growth"])
    def test_analyses_reject_invalid_graphs(self, runner, workdir, command):
        write_graph("bad.json", [(0, 1, -1.0)], 3)
        result = runner.invoke(cli, [command, "bad.json", "-o", "out.json"])
        assert result.exit_code == 1
        assert "invalid graph" in result.output
        assert "edge-positivity at edge 0-1" in result.output
        assert "isolated-vertex at vertex 2" in result.output

    def test_unknown_kind_exits_one(self, runner, workdir):
        result = runner.invoke(cli, ["info", "moebius:n=3"])
        assert result.exit_code == 1
        assert "Unknown family kind" in result.output

    def test_negative_radius_exits_one(self, runner, workdir):
        result = runner.invoke(cli, ["info", "tree", "-R", "-1"])
        assert result.exit_code == 1
        assert "Radius must be >= 0" in result.output

    def test_csv_table(self, runner, workdir):
        result = runner.invoke(cli, ["info", "edge", "-o", "info.json", "--csv", "info.csv"])
        assert result.exit_code == 0
        with open("info.csv") as f:
            lines = f.read().splitlines()
        assert lines[0] == "vertex,m,n,degree"
        assert len(lines) == 3


def test_metric_is_intrinsic(runner, workdir):
    results = run_report(runner, ["metric", "tree:d=3", "-R", "3"])["results"]
    assert results["intrinsic"] is True
    assert results["metric"] == "default-intrinsic"


def test_metric_lipschitz(runner, workdir):
    results = run_report(
        runner, ["metric", "lattice:dim=1", "-R", "4", "--lipschitz", "0", "2", "--epsilon", "0.5"]
    )["results"]
    assert "lipschitz" in results


class TestGrowth:
    def test_lattice_profile(self, runner, workdir):
        report = run_report(
            runner, ["growth", "lattice:dim=1", "-R", "6", "--metric", "natural", "--no-uniform"]
        )
        assert report["results"]["profile"]["counts"] == [1, 3, 5, 7, 9, 11, 13]
        assert "verdict" not in report["results"]

    def test_uniform_certificate(self, runner, workdir):
        report = run_report(runner, ["growth", "lattice:dim=2", "-R", "8", "--metric", "natural"])
        assert report["results"]["verdict"]
        assert report["header"]["config"]["epsilon"] == 0.5

    def test_config_file_defaults(self, runner, workdir):
        (workdir / "graphspec.toml").write_text("seed = 9\nepsilon = 0.25\n")
        report = run_report(runner, ["growth", "lattice:dim=1", "-R", "4", "--seed", "3"])
        config = report["header"]["config"]
        assert config["seed"] == 3
        assert config["epsilon"] == 0.25


class TestSpectra:
    def test_normalized_cycle(self, runner, workdir):
        results = run_report(runner, ["spectra", "cycle:n=6", "--measure", "mn"])["results"]
        assert results["bottom"] == pytest.approx(0.0, abs=1e-9)
        assert results["disk"] == "pass"
        assert results["symmetry"] == "pass"
        assert results["eigenvalues"] == pytest.approx([0, 0.5, 0.5, 1.5, 1.5, 2], abs=1e-9)
        assert set(results["lambda_hat"]) == {"1", "2", "4", "4/3", "inf"}

    def test_exhaustion_series(self, runner, workdir):
        results = run_report(runner, ["spectra", "lattice:dim=1", "-R", "4", "--radii", "4,8,16"])[
            "results"
        ]
        assert results["exhaustion"]["radii"] == [4, 8, 16]
        assert results["exhaustion"]["monotone"] is True

    def test_reports_are_byte_identical(self, runner, workdir):
        texts = []
        for _ in range(2):
            runner.invoke(cli, ["spectra", "tree:d=3,R=3", "-o", "run.json"])
            with open("run.json") as f:
                texts.append(f.read())
        assert texts[0] == texts[1]

    def test_bad_radii(self, runner, workdir):
        result = runner.invoke(cli, ["spectra", "tree", "--radii", "4,2"])
        assert result.exit_code == 1
        assert "strictly increasing" in result.output


class TestCheeger:
    def test_auto_picks_exhaustive(self, runner, workdir):
        results = run_report(runner, ["cheeger", "tree:d=3", "-R", "2"])["results"]
        assert results["cheeger"]["value"] == pytest.approx(0.4)
        assert results["cheeger"]["mode"] == "exhaustive"
        assert results["inequality"]["holds"] is True

    def test_auto_picks_sweep(self, runner, workdir):
        results = run_report(runner, ["cheeger", "tree:d=3", "-R", "5"])["results"]
        assert results["cheeger"]["mode"] == "sweep"

    def test_family_mode(self, runner, workdir):
        results = run_report(
            runner, ["cheeger", "lattice:dim=1", "--mode", "family", "--radii", "1,2,3"]
        )["results"]
        assert results["series"]["radii"] == [1, 2, 3]

    def test_infinity_mode(self, runner, workdir):
        results = run_report(runner, ["cheeger", "tree:d=3", "-R", "3", "--mode", "infinity", "-K", "1"])[
            "results"
        ]
        assert results["cheeger_at_infinity"]["value"] >= 1 / 3

    def test_exhaustive_limit_exits_one(self, runner, workdir):
        result = runner.invoke(cli, ["cheeger", "tree:d=3", "-R", "4", "--mode", "exhaustive"])
        assert result.exit_code == 1
        assert "exhaustive limit" in result.output


class TestHeatcheck:
    def test_lattice_passes(self, runner, workdir):
        report = run_report(runner, ["heatcheck", "lattice:dim=1", "-R", "6", "--resolvent", "0.5"])
        assert report["violations"] == []
        assert "heat-log-decay" in report["results"]
        assert "resolvent-decay:eps=0.5" in report["results"]

    def test_non_intrinsic_metric_exits_two(self, runner, workdir):
        write_graph("heavy.json", [(0, 1, 100.0)], 2)
        report = run_report(
            runner,
            ["heatcheck", "heavy.json", "--metric", "natural", "--t-grid", "0.02"],
            exit_code=2,
        )
        assert report["violations"]
        assert report["violations"][0]["check"] == "heat-log-decay"

    def test_monte_carlo(self, runner, workdir):
        results = run_report(
            runner,
            ["heatcheck", "tree:d=3,c=0.5", "-R", "2", "--mc", "1.0", "0", "0", "--samples", "4000"],
        )["results"]
        assert "feynman_kac" in results
        assert results["domination"] is True


class TestCurvature:
    def test_heptagonal(self, runner, workdir):
        results = run_report(runner, ["curvature", "tess:p=7,q=3", "-L", "3"])["results"]
        assert results["classification"] == "negative"
        assert results["euler_characteristic"] == 1
        assert results["gauss_bonnet"]["agrees"] is True

    def test_not_a_tessellation(self, runner, workdir):
        result = runner.invoke(cli, ["curvature", "tree:d=3"])
        assert result.exit_code == 1
        assert "not a tessellation kind" in result.output


class TestGenerate:
    def test_window_feeds_info(self, runner, workdir):
        result = runner.invoke(cli, ["generate", "tree:d=3", "-R", "2", "-o", "tree.json"])
        assert result.exit_code == 0
        results = run_report(runner, ["info", "tree.json"])["results"]
        assert results["vertices"] == 10

    def test_tessellation_patch_feeds_curvature(self, runner, workdir):
        result = runner.invoke(
            cli, ["generate", "tess:p=4,q=4", "-R", "2", "--tessellation", "-o", "square.json"]
        )
        assert result.exit_code == 0
        results = run_report(runner, ["curvature", "square.json"])["results"]
        assert results["classification"] == "nonnegative"

    def test_save_config(self, runner, workdir):
        result = runner.invoke(
            cli, ["generate", "edge", "-o", "edge.json", "--save-config", "saved.toml"]
        )
        assert result.exit_code == 0
        with open("saved.toml", "rb") as f:
            assert tomllib.load(f)["metric"] == "default-intrinsic"
