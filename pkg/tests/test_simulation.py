import numpy as np
import pytest

import arithmoments.model.simulation as simulation_module
from arithmoments.errors import OrderLimitError, ParameterError
from arithmoments.functions.builtins import builtin
from arithmoments.model.simulation import deviation_table, draw_samples, jackknife, simulate
from arithmoments.model.two_valued import build_model
from arithmoments.models.domain import ProgressionSpec
from arithmoments.primes.sieve import primes_up_to


def model_for(name, n, k=1, l=1):
    return build_model(builtin(name), primes_up_to(n), ProgressionSpec(k=k, l=l, n=n))


def test_empty_model():
    result = simulate(model_for("omega_diff", 100), 1000, seed=3)
    assert np.all(result.samples == 0.0)
    assert result.moments.mean == 0.0
    assert result.moments.central_moments == [0.0, 0.0, 0.0]
    assert result.exact.variance == 0.0
    assert result.moments.standard_errors == [0.0, 0.0, 0.0]


def test_single_prime_bernoulli():
    result = simulate(model_for("omega", 2), 10**6, seed=0, max_order=2)
    moments = result.moments
    assert moments.source == "monte_carlo"
    assert moments.trials == 10**6
    assert abs(moments.mean - 0.5) < 3 * moments.mean_standard_error
    assert moments.mean_standard_error == pytest.approx(0.0005, rel=0.1)
    assert abs(moments.variance - 0.25) < 3 * moments.standard_errors[0] + 1e-6


def test_samples_reproducible():
    model = model_for("log_p_sum", 5000)
    first = draw_samples(model, 3000, seed=11)
    assert np.array_equal(first, draw_samples(model, 3000, seed=11))
    assert np.array_equal(first, draw_samples(model, 3000, seed=11, workers=4))
    assert not np.array_equal(first, draw_samples(model, 3000, seed=12))


def test_prefix_of_longer_run(monkeypatch):
    monkeypatch.setattr(simulation_module.settings, "sim_block_trials", 100)
    model = model_for("omega", 1000)
    short = draw_samples(model, 250, seed=5)
    long = draw_samples(model, 1000, seed=5)
    # block b always draws from the same stream
    assert np.array_equal(short[:200], long[:200])


def test_workers_with_small_entry_chunks(monkeypatch):
    model = model_for("omega", 2000)
    monkeypatch.setattr(simulation_module.settings, "sim_entry_chunk", 64)
    chunked = simulate(model, 2000, seed=1, workers=3)
    again = simulate(model, 2000, seed=1, workers=1)
    assert chunked.moments == again.moments


def test_omega_model_agrees_with_exact():
    result = simulate(model_for("omega", 10**5), 10**5, seed=0, max_order=4)
    exact, sampled = result.exact, result.moments
    assert abs(sampled.mean - exact.mean) < 3 * sampled.mean_standard_error
    for u in (2, 3, 4):
        assert abs(sampled.moment(u) - exact.moment(u)) < 3 * sampled.standard_errors[u - 2]
    assert result.distribution.size == 10**5
    assert result.distribution.mean() == pytest.approx(0.0, abs=0.05)


def test_jackknife_mean_error():
    rng = np.random.default_rng(0)
    samples = rng.normal(size=40_000)
    estimate, errors = jackknife(samples, 0.0, 4)
    assert estimate[0] == pytest.approx(samples.mean())
    assert estimate[1] == pytest.approx(samples.var())
    assert errors[0] == pytest.approx(1 / np.sqrt(samples.size), rel=0.2)
    assert errors[1] == pytest.approx(np.sqrt(2 / samples.size), rel=0.25)


def test_jackknife_single_group():
    estimate, errors = jackknife(np.array([3.0]), 3.0, 2)
    assert estimate.tolist() == [3.0, 0.0]
    assert errors is None


def test_deviation_table():
    result = simulate(model_for("omega", 50), 5000, seed=9, max_order=3)
    rows = deviation_table(result.exact, result.moments)
    assert [row["order"] for row in rows] == [1, 2, 3]
    for row in rows:
        assert row["difference"] == pytest.approx(row["monte_carlo"] - row["exact"])
        assert row["z"] == pytest.approx(row["difference"] / row["standard_error"])


def test_simulation_errors():
    model = model_for("omega", 100)
    with pytest.raises(ParameterError):
        draw_samples(model, 0, seed=0)
    with pytest.raises(OrderLimitError):
        simulate(model, 100, seed=0, max_order=9)


@pytest.mark.parametrize("seed", range(5))
def test_doubling_trials_keeps_moments(seed):
    model = model_for("omega", 10**5)
    short = simulate(model, 10_000, seed=seed, max_order=4).moments
    long = simulate(model, 20_000, seed=seed, max_order=4).moments
    combined = np.hypot(short.mean_standard_error, long.mean_standard_error)
    assert abs(long.mean - short.mean) <= 4 * combined
    for u in (2, 3, 4):
        combined = np.hypot(short.standard_errors[u - 2], long.standard_errors[u - 2])
        assert abs(long.moment(u) - short.moment(u)) <= 4 * combined
