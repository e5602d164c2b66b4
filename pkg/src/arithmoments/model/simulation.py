"""Seeded Monte Carlo sampling of S_n = sum of X_p.

Trials are split into blocks of ``sim_block_trials``. Block b draws from
PCG64 seeded with SeedSequence(entropy=seed, spawn_key=(b,)), and inside a
block entries are drawn in chunks of ``sim_entry_chunk``, so the samples
depend on (seed, trials, model, block size, chunk size) and never on the
number of workers.
"""

import logging
import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from arithmoments.config import get_settings
from arithmoments.empirical.distribution import EmpiricalDistribution
from arithmoments.errors import OrderLimitError, ParameterError
from arithmoments.model.cumulants import MAX_CUMULANT_ORDER
from arithmoments.model.exact import asymptotic_summary, exact_moments
from arithmoments.model.two_valued import TwoValuedModel
from arithmoments.models.domain import ModelMoments
from arithmoments.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

settings = get_settings()

JACKKNIFE_GROUPS = 100


class SimulationResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    moments: ModelMoments
    exact: ModelMoments
    distribution: EmpiricalDistribution
    samples: np.ndarray


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(block,))))


def _simulate_block(model: TwoValuedModel, seed: int, block: int, size: int, chunk: int) -> np.ndarray:
    rng = block_generator(seed, block)
    probabilities = model.probabilities
    totals = np.zeros(size, dtype=np.float64)
    for start in range(0, len(model), chunk):
        stop = min(start + chunk, len(model))
        hits = rng.random((size, stop - start)) < probabilities[start:stop]
        totals += np.where(hits, model.values[start:stop], 0.0).sum(axis=1)
    return totals


def draw_samples(model: TwoValuedModel, trials: int, seed: int, workers: Optional[int] = None) -> np.ndarray:
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}", field="trials")
    block_size = settings.sim_block_trials
    chunk = settings.sim_entry_chunk
    blocks = [(b, min(block_size, trials - b * block_size)) for b in range(math.ceil(trials / block_size))]
    logger.debug(f"Simulating {trials} trials of {len(model)} entries in {len(blocks)} blocks")
    parts = ordered_map(
        lambda block: _simulate_block(model, seed, block[0], block[1], chunk),
        blocks,
        workers or settings.workers,
    )
    return np.concatenate(parts)


def _moments_from_power_sums(sums: np.ndarray, max_order: int) -> np.ndarray:
    """Mean (of the shifted data) and central moments 2..max_order from power sums S_0..S_U."""
    raw = sums[1:] / sums[0]
    mean = raw[0]
    result = [mean]
    for u in range(2, max_order + 1):
        total = (-mean) ** u
        for i in range(1, u + 1):
            total += math.comb(u, i) * raw[i - 1] * (-mean) ** (u - i)
        result.append(total)
    return np.array(result)


def _power_sums(shifted: np.ndarray, max_order: int) -> np.ndarray:
    sums = [float(shifted.size)]
    power = np.ones_like(shifted)
    for _ in range(max_order):
        power = power * shifted
        sums.append(math.fsum(power.tolist()))
    return np.array(sums)


def jackknife(samples: np.ndarray, shift: float, max_order: int) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Statistics (mean, central moments 2..U) and their delete-a-group jackknife errors.

    Power sums are taken about shift, which keeps them small when shift is
    close to the true mean.
    """
    shifted = samples - shift
    groups = min(JACKKNIFE_GROUPS, samples.size)
    group_sums = np.array([_power_sums(part, max_order) for part in np.array_split(shifted, groups)])
    totals = group_sums.sum(axis=0)

    estimate = _moments_from_power_sums(totals, max_order)
    estimate[0] += shift
    if groups < 2:
        return estimate, None

    leave_out = np.array([_moments_from_power_sums(totals - g, max_order) for g in group_sums])
    spread = leave_out - leave_out.mean(axis=0)
    errors = np.sqrt((groups - 1) / groups * (spread**2).sum(axis=0))
    return estimate, errors


def simulate(
    model: TwoValuedModel,
    trials: int,
    seed: int,
    max_order: int = 4,
    workers: Optional[int] = None,
) -> SimulationResult:
    """Sample S_n, report sample moments with jackknife errors and the normalized distribution."""
    if max_order < 2 or max_order > MAX_CUMULANT_ORDER:
        raise OrderLimitError(f"max_order must be in [2, {MAX_CUMULANT_ORDER}], got {max_order}", field="orders")

    exact = exact_moments(model, max_order)
    samples = draw_samples(model, trials, seed, workers)
    estimate, errors = jackknife(samples, exact.mean, max_order)
    asymptotic, max_ratio = asymptotic_summary(model)

    moments = ModelMoments(
        mean=float(estimate[0]),
        variance=float(estimate[1]),
        central_moments=[float(x) for x in estimate[1:]],
        max_order=max_order,
        source="monte_carlo",
        trials=trials,
        seed=seed,
        mean_standard_error=float(errors[0]) if errors is not None else None,
        standard_errors=[float(x) for x in errors[1:]] if errors is not None else None,
        asymptotic_variance=asymptotic,
        max_ratio=max_ratio,
    )

    if exact.variance > 0.0:
        normalized = (samples - exact.mean) / math.sqrt(exact.variance)
    else:
        normalized = samples - exact.mean
    logger.info(
        f"Simulated {trials} trials of {model.function} with seed {seed}: mean={moments.mean:.6g}",
        extra={"n": model.spec.n, "k": model.spec.k},
    )
    return SimulationResult(
        moments=moments,
        exact=exact,
        distribution=EmpiricalDistribution.from_sample(normalized),
        samples=samples,
    )


def deviation_table(exact: ModelMoments, sampled: ModelMoments) -> List[dict]:
    """Per-order exact value, sample value, difference and difference in standard errors."""
    rows = []
    errors = sampled.standard_errors or [None] * len(sampled.central_moments)
    orders = [1] + list(range(2, sampled.max_order + 1))
    exact_values = [exact.mean] + exact.central_moments
    sample_values = [sampled.mean] + sampled.central_moments
    error_values = [sampled.mean_standard_error] + list(errors)
    for u, e, s, se in zip(orders, exact_values, sample_values, error_values):
        rows.append(
            {
                "order": u,
                "exact": e,
                "monte_carlo": s,
                "difference": s - e,
                "standard_error": se,
                "z": (s - e) / se if se else None,
            }
        )
    return rows
