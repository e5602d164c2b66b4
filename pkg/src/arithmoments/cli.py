import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import typer
from pydantic import ValidationError
from typer import Option

from arithmoments.cache.prime_cache import get_cache_path, load_or_build_primes, load_prime_set
from arithmoments.config import get_settings
from arithmoments.empirical.moments import empirical_moments, normalized_cdf
from arithmoments.empirical.source import ProgressionValues
from arithmoments.errors import ArithMomentsError, ConfigError
from arithmoments.experiment import (
    ExperimentConfig,
    load_experiment_config,
    resolve_function,
    validation_field,
    validation_message,
)
from arithmoments.functions.builtins import builtin
from arithmoments.limitlaws.ks import ks_report, ks_two_sample_report
from arithmoments.limitlaws.normal import normal_cdf
from arithmoments.limitlaws.profile import condition_profile
from arithmoments.logging import setup_logging
from arithmoments.model.exact import exact_moments
from arithmoments.model.simulation import deviation_table, simulate
from arithmoments.model.two_valued import build_model
from arithmoments.predictor.sums import compare, moment_sums, smallness_proxy
from arithmoments.primes.types import PrimeSet
from arithmoments.sinks.csv_export import (
    export_comparisons,
    export_histogram,
    export_moment_report,
    export_profile,
    export_rows,
    export_samples,
)
from arithmoments.sinks.json_export import dumps, export_json
from arithmoments.utils.ids import generate_experiment_id, generate_run_id

app = typer.Typer(help="Moments and limit laws of additive functions on arithmetic progressions")
settings = get_settings()
logger = logging.getLogger(__name__)

state: Dict[str, Any] = {"workers": None}

EXIT_CONFIG = 2
EXIT_COMPUTE = 3


def fail(kind: str, message: str, field: Optional[str], code: int) -> None:
    typer.echo(json.dumps({"error": kind, "message": message, "field": field}, ensure_ascii=False), err=True)
    sys.exit(code)


def run_command(command: str, config_path: Optional[Path], overrides: Dict[str, Any], body: Callable[[ExperimentConfig, str], List[Path]]) -> None:
    run_id = generate_run_id()
    try:
        config = load_experiment_config(config_path, overrides)
        if config.workers is None and state["workers"] is not None:
            config = config.model_copy(update={"workers": state["workers"]})
        config.custom()  # a bad rule fails before any primes are built
        experiment_id = generate_experiment_id(command, config.identity())
        logger.info(f"Starting {command} experiment {experiment_id}", extra={"run_id": run_id, "command": command, "n": config.n, "k": config.k})
        written = body(config, experiment_id)
    except ValidationError as e:
        fail("config", validation_message(e), validation_field(e), EXIT_CONFIG)
        return
    except ConfigError as e:
        fail(e.kind, e.message, e.field, EXIT_CONFIG)
        return
    except ArithMomentsError as e:
        logger.error(f"{command} failed: {e.message}", extra={"run_id": run_id, "command": command})
        fail(e.kind, e.message, e.field, EXIT_COMPUTE)
        return

    logger.info(f"Finished {command}, {len(written)} files written", extra={"run_id": run_id, "command": command})
    for path in written:
        typer.echo(str(path))


def load_primes(config: ExperimentConfig) -> PrimeSet:
    return load_or_build_primes(max(config.n, 2))


@app.callback()
def main(
    workers: Optional[int] = Option(None, "--workers", min=1, help="Worker threads for segments and trial blocks"),
    log_level: Optional[str] = Option(None, "--log-level", help="Log level, defaults to ARITHMOMENTS_LOG_LEVEL"),
) -> None:
    """Reproducible experiments on moments and limit laws of additive arithmetic functions."""
    state["workers"] = workers
    setup_logging((log_level or settings.log_level).upper())


@app.command()
def moments(
    fn: Optional[str] = Option(None, "--fn", help="Function name (built-in, kolmogorov_example or custom)"),
    rule: Optional[str] = Option(None, "--rule", help="Rule expression over p and a for a custom function"),
    kind: Optional[str] = Option(None, "--kind", help="additive or strongly_additive (custom rules)"),
    k: Optional[int] = Option(None, "--k", help="Modulus"),
    l: Optional[int] = Option(None, "--l", help="Residue, required when k > 1"),
    n: Optional[int] = Option(None, "--n", help="Upper bound"),
    orders: Optional[int] = Option(None, "--orders", help="Highest moment order U"),
    mode: Optional[str] = Option(None, "--mode", help="paper_progression, divisor_density or both"),
    params: Optional[str] = Option(None, "--params", help="Kolmogorov params A=..,C=..,mu=..,nu=.."),
    config: Optional[Path] = Option(None, "--config", help="Flat YAML experiment config"),
    out: Optional[Path] = Option(None, "--out", help="Report directory (default ./reports)"),
) -> None:
    """Empirical moments over a progression next to the predicted prime sums."""
    overrides = dict(fn=fn, rule=rule, kind=kind, k=k, l=l, n=n, orders=orders, mode=mode, params=params, out=out)

    def body(cfg: ExperimentConfig, experiment_id: str) -> List[Path]:
        spec = cfg.progression()
        primes = load_primes(cfg)
        f = resolve_function(cfg, primes)

        source = ProgressionValues(f, spec, workers=cfg.workers)
        report = empirical_moments(f, spec, max(cfg.orders, 2), source=source)
        reports: Dict[str, Any] = {"empirical_moments": report}
        comparisons = []
        for mode_ in cfg.modes():
            predicted = moment_sums(f, spec, mode_, cfg.orders, primes)
            comparison = compare(report, predicted)
            reports[f"predicted_{mode_.value}"] = predicted
            reports[f"comparison_{mode_.value}"] = comparison
            comparisons.append(comparison)

        written = export_json(reports, cfg.out, experiment_id, "moments", cfg.identity())
        written.append(export_moment_report(report, cfg.out / "empirical_moments.csv"))
        written.append(export_comparisons(comparisons, cfg.out / "comparison.csv"))
        return written

    run_command("moments", config, overrides, body)


@app.command(name="simulate")
def simulate_cmd(
    fn: Optional[str] = Option(None, "--fn", help="Function name (built-in, kolmogorov_example or custom)"),
    rule: Optional[str] = Option(None, "--rule", help="Rule expression over p and a for a custom function"),
    kind: Optional[str] = Option(None, "--kind", help="additive or strongly_additive (custom rules)"),
    k: Optional[int] = Option(None, "--k", help="Modulus"),
    l: Optional[int] = Option(None, "--l", help="Residue, required when k > 1"),
    n: Optional[int] = Option(None, "--n", help="Upper bound of the prime set"),
    orders: Optional[int] = Option(None, "--orders", help="Highest moment order (2..8)"),
    mode: Optional[str] = Option(None, "--mode", help="paper_progression or divisor_density"),
    trials: Optional[int] = Option(None, "--trials", help="Monte Carlo trials"),
    seed: Optional[int] = Option(None, "--seed", help="Seed of the trial streams"),
    params: Optional[str] = Option(None, "--params", help="Kolmogorov params A=..,C=..,mu=..,nu=.."),
    export_samples_: Optional[bool] = Option(None, "--export-samples/--no-export-samples", help="Write a capped sample CSV"),
    config: Optional[Path] = Option(None, "--config", help="Flat YAML experiment config"),
    out: Optional[Path] = Option(None, "--out", help="Report directory (default ./reports)"),
) -> None:
    """Exact and Monte Carlo moments of the two-valued model S_n."""
    overrides = dict(
        fn=fn, rule=rule, kind=kind, k=k, l=l, n=n, orders=orders, mode=mode,
        trials=trials, seed=seed, params=params, export_samples=export_samples_, out=out,
    )

    def body(cfg: ExperimentConfig, experiment_id: str) -> List[Path]:
        spec = cfg.progression()
        primes = load_primes(cfg)
        f = resolve_function(cfg, primes)
        max_order = max(cfg.orders, 2)

        model = build_model(f, primes, spec, cfg.single_mode())
        result = simulate(model, cfg.trials, cfg.seed, max_order=max_order, workers=cfg.workers)
        summary = {
            "function": model.function,
            "spec": spec,
            "mode": model.mode,
            "entries": len(model),
            "trials": cfg.trials,
            "seed": cfg.seed,
            "degenerate": result.exact.variance == 0.0,
            "moments": result.moments,
            "standard_errors": result.moments.standard_errors,
        }
        reports = {"exact_moments": exact_moments(model, max_order), "simulation": summary}

        written = export_json(reports, cfg.out, experiment_id, "simulate", cfg.identity())
        written.append(export_rows(deviation_table(result.exact, result.moments), cfg.out / "deviation.csv"))
        if cfg.export_samples:
            written.append(export_samples(result.samples, cfg.out / "samples.csv", settings.export_max_rows))
        return written

    run_command("simulate", config, overrides, body)


@app.command()
def limits(
    fn: Optional[str] = Option(None, "--fn", help="Function name (built-in, kolmogorov_example or custom)"),
    rule: Optional[str] = Option(None, "--rule", help="Rule expression over p and a for a custom function"),
    kind: Optional[str] = Option(None, "--kind", help="additive or strongly_additive (custom rules)"),
    k: Optional[int] = Option(None, "--k", help="Modulus"),
    l: Optional[int] = Option(None, "--l", help="Residue, required when k > 1"),
    n: Optional[int] = Option(None, "--n", help="Upper bound"),
    mode: Optional[str] = Option(None, "--mode", help="paper_progression or divisor_density"),
    vs: Optional[str] = Option(None, "--vs", help="normal (KS vs the normal law), kfun (profile vs K) or omega_diff (two-sample KS vs Omega - omega)"),
    params: Optional[str] = Option(None, "--params", help="Kolmogorov params A=..,C=..,mu=..,nu=.."),
    epsilon: Optional[float] = Option(None, "--epsilon", help="Add the smallness proxy for this epsilon"),
    config: Optional[Path] = Option(None, "--config", help="Flat YAML experiment config"),
    out: Optional[Path] = Option(None, "--out", help="Report directory (default ./reports)"),
) -> None:
    """Condition profile, KS distance to the normal law, and comparison with K(u)."""
    overrides = dict(fn=fn, rule=rule, kind=kind, k=k, l=l, n=n, mode=mode, vs=vs, params=params, epsilon=epsilon, out=out)

    def body(cfg: ExperimentConfig, experiment_id: str) -> List[Path]:
        if cfg.vs == "kfun" and cfg.params is None:
            raise ConfigError("--vs kfun needs Kolmogorov params", field="params")
        spec = cfg.progression()
        primes = load_primes(cfg)
        f = resolve_function(cfg, primes)
        mode_ = cfg.single_mode()
        params_ = cfg.kolmogorov_params() if cfg.vs == "kfun" else None

        reports: Dict[str, Any] = {}
        written: List[Path] = []
        # functions vanishing on primes have no condition profile, only the comparison with Omega - omega
        profile = condition_profile(f, spec, mode_, primes, params=params_) if cfg.vs != "omega_diff" else None
        reports["profile"] = profile
        if cfg.vs == "normal":
            source = ProgressionValues(f, spec, workers=cfg.workers)
            distribution = normalized_cdf(f, spec, source=source)
            reports["ks_normal"] = ks_report(distribution, normal_cdf, spec.n, "normal")
            if distribution.is_histogram:
                written.append(export_histogram(distribution, cfg.out / "histogram.csv"))
        if cfg.vs == "omega_diff":
            reference = builtin("omega_diff")
            distribution = normalized_cdf(f, spec, source=ProgressionValues(f, spec, workers=cfg.workers))
            reference_distribution = normalized_cdf(
                reference, spec, source=ProgressionValues(reference, spec, workers=cfg.workers)
            )
            reports["ks_omega_diff"] = ks_two_sample_report(distribution, reference_distribution, spec.n, "omega_diff")
        if cfg.epsilon is not None:
            reports["smallness"] = smallness_proxy(f, spec, mode_, primes, cfg.epsilon)

        written = export_json(reports, cfg.out, experiment_id, "limits", cfg.identity()) + written
        if profile is not None:
            written.append(export_profile(profile, cfg.out / "profile.csv"))
        return written

    run_command("limits", config, overrides, body)


@app.command()
def primes(
    n: int = Option(..., "--n", min=2, help="Bound of the cached prime set"),
    validate: bool = Option(False, "--validate", help="Only validate an existing cache file"),
    force: bool = Option(False, "--force", help="Rebuild even if a covering cache exists"),
) -> None:
    """Build or validate the on-disk prime cache."""
    try:
        if validate:
            prime_set = load_prime_set(get_cache_path(n), expected_bound=n)
        else:
            prime_set = load_or_build_primes(n, force=force)
    except ArithMomentsError as e:
        fail(e.kind, e.message, e.field, EXIT_COMPUTE)
        return
    typer.echo(dumps({"bound": prime_set.bound, "count": len(prime_set), "path": str(get_cache_path(n))}), nl=False)
