"""Command line reports and exit codes"""
import json

import numpy as np
import tails
from pytest import approx, fixture, mark
from tails import cli, utils
from tails.sampling import moving_max_series, sample_copula
from tails.settings import EXIT_CONFIG_ERROR, EXIT_INPUT_ERROR, EXIT_SUCCESS


# Module fixtures ---------------------------------------------------
@fixture(scope="class")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@fixture(scope="class")
def run(workdir):
    """Runs the command line and returns its exit code and output."""
    def execute(*args, name="report.json"):
        out = workdir / name
        code = cli.main([*args, "--out", str(out)])
        return code, (out.read_text() if out.exists() else None)
    return execute


@fixture(scope="class")
def coins(csv_file):
    rows = [[0, 0, 1], [0, 0.5, 0], [1, 0, 0.5]]
    return csv_file("coins.csv", rows, header="comonotone fair coins")


@fixture(scope="class")
def report(request, run):
    code, text = run(*request.param)
    assert code == EXIT_SUCCESS
    return json.loads(text)


@fixture(scope="class")
def estimates(report):
    return {x["name"]: x for x in report["estimates"]}


# Requirements ------------------------------------------------------
class ReportRequirements:
    def test_schema(self, report):
        assert report["schema"] == 1
        assert report["tool"] == "tails"
        assert report["version"] == tails.__version__

    def test_config_echo(self, report):
        assert report["config"]["command"] == report["command"]

    def test_paths(self, estimates):
        for estimate in estimates.values():
            assert "path" in estimate or "violations" in estimate


# Parametrization ---------------------------------------------------
@mark.parametrize("report", [
    ["tail", "--family", "clayton", "--theta", "1", "--side", "lower"],
], indirect=True)
class TestClaytonLower(ReportRequirements):
    def test_limit(self, estimates):
        assert estimates["lambda_tilde_lower"]["extrapolated"] == approx(0.5, abs=1e-4)

    def test_standard_path(self, estimates):
        assert estimates["lambda_standard_lower"]["formula"] == "standard"

    def test_single_side(self, estimates):
        assert "lambda_tilde_upper" not in estimates


@mark.parametrize("report", [
    ["tail", "--family", "comonotone", "--side", "upper"],
], indirect=True)
class TestComonotoneUpper(ReportRequirements):
    def test_limit(self, estimates):
        estimate = estimates["lambda_tilde_upper"]
        assert estimate["extrapolated"] == approx(1.0, abs=1e-12)
        assert estimate["converged"] is True


class TestJointPMF:
    @fixture(scope="class")
    def report(self, run, coins):
        code, text = run("tail", "--joint-pmf", coins, "--side", "lower")
        assert code == EXIT_SUCCESS
        return json.loads(text)

    def test_limit(self, estimates):
        estimate = estimates["lambda_tilde_lower"]
        assert estimate["extrapolated"] == approx(0.0, abs=1e-7)
        assert estimate["extension"] == "checkerboard"

    def test_caveat(self, report):
        assert cli.EXTENSION_CAVEAT in report["warnings"]

    def test_no_standard_path(self, estimates):
        assert "lambda_standard_lower" not in estimates

    def test_margin_files(self, run, csv_file):
        mass = csv_file("mass.csv", [[0.5, 0.0], [0.0, 0.5]])
        margin = csv_file("margin.csv", [[0, 0.5], [1, 0.5]])
        code, text = run("tail", "--joint-pmf", mass, "--row-margin", margin,
                         "--col-margin", margin, "--side", "lower")
        assert code == EXIT_SUCCESS
        estimate = json.loads(text)["estimates"][0]
        assert estimate["extrapolated"] == approx(0.0, abs=1e-7)


class TestBRV:
    def test_matched(self, run):
        code, text = run("brv", "--family", "gumbel", "--theta", "2")
        assert code == EXIT_SUCCESS
        result = json.loads(text)["estimates"][0]
        assert result["matched"] is True
        assert result["discrepancy"] < 1e-12

    def test_gumbel_limit(self, run):
        code, text = run("brv", "--family", "gumbel", "--theta", "3")
        nu = json.loads(text)["estimates"][0]["nu_estimate"]
        assert nu == approx(2.0 - 2.0 ** (1.0 / 3.0), abs=1e-3)

    def test_independence(self, run):
        code, text = run("brv", "--family", "independence", "--scales", "10,100,1000")
        result = json.loads(text)["estimates"][0]
        assert result["nu_estimate"] == approx(0.0, abs=1e-12)
        assert result["lambda_tilde_u"] == approx(0.0, abs=1e-12)


class TestSimulate:
    def test_comonotone(self, run, workdir):
        code, _ = run("simulate", "--family", "comonotone", "--n", "10",
                      name="comonotone.csv")
        sample = utils.read_pairs(str(workdir / "comonotone.csv"))
        assert code == EXIT_SUCCESS
        assert sample.n == 10
        assert np.array_equal(sample.x, sample.y)

    def test_header(self, run):
        _, text = run("simulate", "--family", "clayton", "--theta", "2",
                      "--n", "1000", "--seed", "42", name="clayton.csv")
        header = text.splitlines()[0]
        assert header.startswith("#")
        assert "seed=42" in header and "clayton(theta=2.0)" in header
        assert len(text.splitlines()) == 1001

    def test_deterministic(self, run):
        args = ("simulate", "--family", "clayton", "--theta", "2", "--n", "1000",
                "--seed", "42")
        _, first = run(*args, name="first.csv")
        _, second = run(*args, name="second.csv")
        assert first == second

    def test_round_trip(self, run, workdir):
        run("simulate", "--family", "gumbel", "--theta", "2", "--n", "500",
            "--seed", "5", name="gumbel.csv")
        sample = utils.read_pairs(str(workdir / "gumbel.csv"))
        expected = sample_copula(tails.copula("gumbel", theta=2.0), 500, 5)
        assert np.array_equal(sample.x, expected.x)
        assert np.array_equal(sample.y, expected.y)

    def test_moving_max(self, run, workdir):
        run("simulate", "--process", "moving-max", "--n", "10", "--seed", "7",
            name="series.csv")
        series = utils.read_series(str(workdir / "series.csv"))
        assert np.array_equal(series.values, moving_max_series(10, 7).values)

    def test_margin(self, run, workdir):
        run("simulate", "--family", "independence", "--n", "100",
            "--margin", "unit-pareto", name="pareto.csv")
        sample = utils.read_pairs(str(workdir / "pareto.csv"))
        assert np.all(sample.x >= 1.0) and np.all(sample.y >= 1.0)


class TestEmpirical:
    def test_pairs(self, run, workdir):
        run("simulate", "--family", "comonotone", "--n", "1000", "--seed", "1",
            name="pairs.csv")
        code, text = run("tail", "--pairs", str(workdir / "pairs.csv"),
                         "--schedule", "geometric:0.1,0.5,3")
        assert code == EXIT_SUCCESS
        estimates = json.loads(text)["estimates"]
        assert [x["name"] for x in estimates] == ["empirical_upper", "empirical_lower"]
        assert all(r == 1.0 for x in estimates for r in x["path"]["ratio"])

    def test_truncated_schedule(self, run, workdir):
        run("simulate", "--family", "independence", "--n", "1000", name="iid.csv")
        code, text = run("tail", "--pairs", str(workdir / "iid.csv"), "--side", "upper")
        report = json.loads(text)
        assert code == EXIT_SUCCESS
        assert report["estimates"][0]["path"]["t"] == approx([0.9, 0.99])
        assert any("truncated" in x for x in report["warnings"])

    def test_copy_series(self, run, csv_file):
        series = csv_file("copy.csv", np.arange(1.0, 1001.0))
        code, text = run("auto", "--series", series, "--lag", "1",
                         "--schedule", "explicit:0.5,0.9,0.98")
        values = json.loads(text)["estimates"][0]["path"]["value"]
        assert code == EXIT_SUCCESS
        assert values == [1.0, 1.0, 1.0]

    def test_auto_sides(self, run, csv_file):
        series = csv_file("copy_sides.csv", np.arange(1.0, 1001.0))
        args = ("auto", "--series", series, "--schedule", "geometric:0.1,0.5,3")
        upper = json.loads(run(*args, name="upper.json")[1])["estimates"]
        both = json.loads(run(*args, "--side", "both", name="both.json")[1])["estimates"]
        assert [x["name"] for x in upper] == ["auto_tail_upper"]
        assert [x["name"] for x in both] == ["auto_tail_upper", "auto_tail_lower"]

    def test_iid_series(self, run, csv_file):
        rng = np.random.Generator(np.random.PCG64(9))
        series = csv_file("iid_series.csv", rng.random(100_000))
        _, text = run("auto", "--series", series, "--schedule", "explicit:0.9,0.99")
        values = json.loads(text)["estimates"][0]["path"]["value"]
        assert values == approx([0.1, 0.01], abs=0.01)

    @mark.slow
    def test_moving_max(self, run, workdir):
        run("simulate", "--process", "moving-max", "--n", "1000000", "--seed", "2",
            name="moving_max.csv")
        _, text = run("auto", "--series", str(workdir / "moving_max.csv"),
                      "--schedule", "explicit:0.99,0.999")
        estimate = json.loads(text)["estimates"][0]
        assert estimate["extrapolated"] == approx(0.5, abs=0.05)


class TestOutput:
    def test_reproducible(self, run):
        args = ("tail", "--family", "gumbel", "--theta", "2")
        first = json.loads(run(*args, name="a.json")[1])
        second = json.loads(run(*args, name="b.json")[1])
        del first["timestamp"], second["timestamp"]
        assert first == second

    def test_csv(self, run):
        code, text = run("tail", "--family", "clayton", "--theta", "2",
                         "--side", "lower", "--format", "csv", name="paths.csv")
        lines = text.splitlines()
        assert code == EXIT_SUCCESS
        assert lines[0] == "estimate,t,ratio"
        assert len(lines) == 1 + 2 * 8

    def test_validate(self, run):
        code, text = run("validate", "--family", "independence", "--grid-size", "20")
        result = json.loads(text)["estimates"][0]
        assert code == EXIT_SUCCESS
        assert result["ok"] is True
        assert result["max_violation"] == 0.0

    def test_standard_output(self, capsys):
        assert cli.main(["validate", "--family", "comonotone"]) == EXIT_SUCCESS
        assert json.loads(capsys.readouterr().out)["command"] == "validate"


class TestExitCodes:
    def test_missing_file(self, run, workdir):
        code, _ = run("tail", "--pairs", str(workdir / "missing.csv"))
        assert code == EXIT_INPUT_ERROR

    def test_malformed_file(self, run, csv_file):
        code, _ = run("tail", "--pairs", csv_file("one_column.csv", [1.0, 2.0]))
        assert code == EXIT_INPUT_ERROR

    def test_inconsistent_pmf(self, run, csv_file):
        pmf = csv_file("bad_pmf.csv", [[0, 0, 1], [0, 0.5, 0], [1, 0, 0.6]])
        code, _ = run("tail", "--joint-pmf", pmf)
        assert code == EXIT_INPUT_ERROR

    def test_unwritable(self, workdir):
        out = str(workdir / "missing" / "report.json")
        code = cli.main(["validate", "--family", "comonotone", "--out", out])
        assert code == EXIT_INPUT_ERROR

    @mark.parametrize("args", [
        ["tail", "--family", "frank", "--theta", "2"],
        ["tail", "--family", "clayton", "--theta", "-1"],
        ["tail", "--family", "clayton", "--theta", "2", "--schedule", "geometric:2"],
        ["tail", "--family", "clayton", "--theta", "2", "--unknown"],
        ["tail", "--theta", "2"],
        ["auto"],
        ["brv", "--family", "gumbel", "--theta", "2", "--scales", "10,1"],
        ["validate", "--family", "comonotone", "--grid-size", "1"],
        ["simulate", "--process", "moving-max", "--margin", "uniform"],
        ["simulate", "--family", "independence", "--n", "10", "--seed", "-1"],
        ["simulate", "--process", "moving-max", "--seed", str(2 ** 64)],
        ["tail", "--family", "gumbel", "--theta", "2",
         "--schedule", "geometric:0.1,0.1,20"],
    ])
    def test_config_error(self, run, args):
        code, _ = run(*args, name="error.json")
        assert code == EXIT_CONFIG_ERROR

    def test_series_too_short(self, run, csv_file):
        series = csv_file("short.csv", np.arange(50.0))
        code, _ = run("auto", "--series", series)
        assert code == EXIT_CONFIG_ERROR
