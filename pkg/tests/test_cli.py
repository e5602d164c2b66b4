import json
import logging
from pathlib import Path

import pytest
from typer.testing import CliRunner

import arithmoments.cache.prime_cache as cache_module
from arithmoments.cli import app
from arithmoments.logging import JSONFormatter

FIXTURES = Path(__file__).parent / "fixtures" / "experiments"

runner = CliRunner()


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setattr(cache_module.settings, "cache_dir", tmp_path / "cache")
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler.formatter, JSONFormatter):
            root.removeHandler(handler)


def invoke(*args):
    return runner.invoke(app, ["--log-level", "ERROR", *[str(a) for a in args]])


def error_of(result):
    for line in result.output.splitlines():
        if line.startswith("{"):
            data = json.loads(line)
            if "error" in data:
                return data
    raise AssertionError(f"no error line in {result.output!r}")


def read_reports(out: Path):
    return {path.name: path.read_bytes() for path in sorted(out.iterdir())}


def test_moments_writes_reports(tmp_path):
    out = tmp_path / "reports"
    result = invoke("moments", "--fn", "omega", "--n", 10_000, "--orders", 4, "--out", out)
    assert result.exit_code == 0, result.output
    assert set(read_reports(out)) == {
        "empirical_moments.json",
        "predicted_paper_progression.json",
        "predicted_divisor_density.json",
        "comparison_paper_progression.json",
        "comparison_divisor_density.json",
        "empirical_moments.csv",
        "comparison.csv",
        "manifest.json",
    }
    report = json.loads((out / "empirical_moments.json").read_text(encoding="utf-8"))
    assert report["count"] == 10_000
    assert len(report["central_moments"]) == 3

    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["command"] == "moments"
    assert "out" not in manifest["config"]
    assert "empirical_moments.json" in manifest["reports"]


def test_moments_are_reproducible(tmp_path):
    args = ["moments", "--fn", "big_omega", "--k", 4, "--l", 3, "--n", 50_000, "--orders", 6]
    first = invoke(*args, "--out", tmp_path / "a")
    second = invoke(*args, "--out", tmp_path / "b")
    threaded = runner.invoke(app, ["--log-level", "ERROR", "--workers", "4", *[str(a) for a in args], "--out", str(tmp_path / "c")])
    assert first.exit_code == second.exit_code == threaded.exit_code == 0
    assert read_reports(tmp_path / "a") == read_reports(tmp_path / "b") == read_reports(tmp_path / "c")


def test_missing_residue_is_a_config_error(tmp_path):
    result = invoke("moments", "--k", 4, "--n", 1000, "--out", tmp_path)
    assert result.exit_code == 2
    error = error_of(result)
    assert error["error"] == "config"
    assert "l is required" in error["message"]


def test_residue_must_be_coprime(tmp_path):
    result = invoke("moments", "--k", 4, "--l", 2, "--n", 1000, "--out", tmp_path)
    assert result.exit_code == 2
    assert error_of(result)["field"] == "l"


def test_unknown_flag():
    result = invoke("moments", "--n", 100, "--bogus", 1)
    assert result.exit_code == 2


def test_order_limit_is_a_compute_error(tmp_path):
    result = invoke("moments", "--n", 1000, "--orders", 13, "--out", tmp_path)
    assert result.exit_code == 3
    error = error_of(result)
    assert error["error"] == "order_limit"
    assert error["field"] == "orders"


def test_unknown_function(tmp_path):
    result = invoke("moments", "--fn", "tau", "--n", 1000, "--out", tmp_path)
    assert result.exit_code == 2
    assert "tau" in error_of(result)["message"]


def test_omega_diff_has_vanishing_prime_sums(tmp_path):
    result = invoke("moments", "--fn", "omega_diff", "--n", 10_000, "--mode", "paper_progression", "--out", tmp_path)
    assert result.exit_code == 0, result.output
    predicted = json.loads((tmp_path / "predicted_paper_progression.json").read_text(encoding="utf-8"))
    assert predicted["sums"] == [0.0, 0.0, 0.0, 0.0]
    comparison = json.loads((tmp_path / "comparison_paper_progression.json").read_text(encoding="utf-8"))
    assert all(row["ratio"] is None for row in comparison["rows"])


def test_custom_rule(tmp_path):
    result = invoke("moments", "--fn", "squares", "--rule", "a * a", "--n", 5000, "--mode", "divisor_density", "--out", tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "empirical_moments.json").read_text(encoding="utf-8"))
    assert report["function"] == "squares"


def test_bad_rule(tmp_path):
    result = invoke("moments", "--fn", "bad", "--rule", "import os", "--n", 100, "--out", tmp_path)
    assert result.exit_code == 2
    error = error_of(result)
    assert error["error"] == "config"
    assert error["field"] == "rule"
    assert not (tmp_path / "empirical_moments.json").exists()


def test_simulate(tmp_path):
    result = invoke("simulate", "--fn", "omega", "--n", 1000, "--trials", 2000, "--seed", 7, "--orders", 3, "--out", tmp_path, "--export-samples")
    assert result.exit_code == 0, result.output
    summary = json.loads((tmp_path / "simulation.json").read_text(encoding="utf-8"))
    exact = json.loads((tmp_path / "exact_moments.json").read_text(encoding="utf-8"))
    assert summary["entries"] == 168
    assert summary["degenerate"] is False
    assert summary["mode"] == "paper_progression"
    assert len(summary["standard_errors"]) == 2
    assert exact["source"] == "exact"
    assert (tmp_path / "deviation.csv").read_text(encoding="utf-8").startswith("order,exact,monte_carlo")
    assert len((tmp_path / "samples.csv").read_text(encoding="utf-8").splitlines()) == 2001


def test_simulate_reproducible_across_workers(tmp_path):
    args = ["simulate", "--fn", "log_p_sum", "--n", 2000, "--trials", 3000, "--seed", 1]
    first = invoke(*args, "--out", tmp_path / "a")
    threaded = runner.invoke(app, ["--log-level", "ERROR", "--workers", "3", *[str(a) for a in args], "--out", str(tmp_path / "b")])
    assert first.exit_code == threaded.exit_code == 0
    assert read_reports(tmp_path / "a") == read_reports(tmp_path / "b")


def test_simulate_degenerate(tmp_path):
    result = invoke("simulate", "--fn", "omega_diff", "--n", 1000, "--trials", 100, "--out", tmp_path)
    assert result.exit_code == 0, result.output
    summary = json.loads((tmp_path / "simulation.json").read_text(encoding="utf-8"))
    assert summary["entries"] == 0
    assert summary["degenerate"] is True


def test_limits_against_normal(tmp_path):
    result = invoke("limits", "--fn", "omega", "--n", 20_000, "--epsilon", 0.5, "--out", tmp_path)
    assert result.exit_code == 0, result.output
    ks = json.loads((tmp_path / "ks_normal.json").read_text(encoding="utf-8"))
    assert ks["reference"] == "normal"
    assert 0 < ks["distance"] < 0.5
    assert ks["sample_size"] == 20_000
    smallness = json.loads((tmp_path / "smallness.json").read_text(encoding="utf-8"))
    assert smallness["exceed_fraction"] == 1.0
    assert (tmp_path / "profile.csv").read_text(encoding="utf-8").startswith("u,F_n,K,abs_diff\n")


def test_limits_kfun_needs_params(tmp_path):
    result = invoke("limits", "--fn", "omega", "--n", 1000, "--vs", "kfun", "--out", tmp_path)
    assert result.exit_code == 2
    assert error_of(result)["field"] == "params"


def test_limits_kolmogorov_example(tmp_path):
    result = invoke(
        "limits", "--fn", "kolmogorov_example", "--params", "A=-1,C=1,mu=0.3,nu=0.3",
        "--n", 20_000, "--vs", "kfun", "--out", tmp_path,
    )
    assert result.exit_code == 0, result.output
    profile = json.loads((tmp_path / "profile.json").read_text(encoding="utf-8"))
    assert len(profile["kolmogorov"]) == len(profile["grid"])
    assert 0.0 <= profile["sup_distance"] <= 1.0
    assert not (tmp_path / "ks_normal.json").exists()


def test_limits_bad_params(tmp_path):
    result = invoke(
        "limits", "--fn", "kolmogorov_example", "--params", "A=-1,C=1,mu=0.7,nu=0.7",
        "--n", 1000, "--vs", "kfun", "--out", tmp_path,
    )
    assert result.exit_code == 2
    assert error_of(result)["field"] == "params"


def test_limits_degenerate(tmp_path):
    result = invoke("limits", "--fn", "omega_diff", "--n", 1000, "--out", tmp_path)
    assert result.exit_code == 3
    assert error_of(result)["error"] == "degenerate_distribution"


def test_primes_command():
    result = invoke("primes", "--n", 1000)
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["bound"] == 1000
    assert data["count"] == 168

    validated = invoke("primes", "--n", 1000, "--validate")
    assert validated.exit_code == 0
    assert json.loads(validated.output)["count"] == 168


def test_primes_validate_without_cache():
    result = invoke("primes", "--n", 500, "--validate")
    assert result.exit_code == 3
    assert error_of(result)["error"] == "cache"


def test_help_lists_flags():
    result = runner.invoke(app, ["moments", "--help"])
    assert result.exit_code == 0
    for flag in ("--fn", "--rule", "--k", "--l", "--n", "--orders", "--mode", "--config", "--out"):
        assert flag in result.output


def test_config_file_with_override(tmp_path):
    result = invoke("moments", "--config", FIXTURES / "omega_mod4.yaml", "--n", 10_000, "--out", tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "empirical_moments.json").read_text(encoding="utf-8"))
    assert report["spec"] == {"k": 4, "l": 3, "n": 10_000}
    assert report["count"] == 2500


def test_nested_config_is_rejected(tmp_path):
    config = tmp_path / "nested.yaml"
    config.write_text("n: 1000\nprogression:\n  k: 4\n  l: 1\n", encoding="utf-8")
    result = invoke("moments", "--config", config, "--out", tmp_path / "out")
    assert result.exit_code == 2
    assert error_of(result)["field"] == "progression"


def test_unknown_config_key(tmp_path):
    config = tmp_path / "extra.yaml"
    config.write_text("n: 1000\ncolour: blue\n", encoding="utf-8")
    result = invoke("moments", "--config", config, "--out", tmp_path / "out")
    assert result.exit_code == 2
    assert error_of(result)["field"] == "colour"


def test_limits_against_omega_diff(tmp_path):
    result = invoke("limits", "--fn", "half_omega_diff", "--n", 20_000, "--vs", "omega_diff", "--out", tmp_path)
    assert result.exit_code == 0, result.output
    ks = json.loads((tmp_path / "ks_omega_diff.json").read_text(encoding="utf-8"))
    assert ks["reference"] == "omega_diff"
    assert ks["sample_size"] == 20_000
    # half of Omega - omega normalizes to exactly the same values
    assert ks["distance"] == 0.0
    assert not (tmp_path / "profile.csv").exists()
    assert not (tmp_path / "ks_normal.json").exists()
