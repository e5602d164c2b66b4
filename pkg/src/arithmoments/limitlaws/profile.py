import logging
import math
from typing import Optional, Sequence

import numpy as np

from arithmoments.errors import DegenerateDistributionError
from arithmoments.functions.types import AdditiveFunction
from arithmoments.limitlaws.kolmogorov import KolmogorovFunction
from arithmoments.models.domain import ConditionProfile, KolmogorovParams, PrimeSumMode, ProgressionSpec
from arithmoments.predictor.sums import selected_primes
from arithmoments.primes.types import PrimeSet
from arithmoments.utils.summation import descending_sum

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 512
GRID_MARGIN = 0.1


def default_grid(values: np.ndarray, scale: float) -> np.ndarray:
    normalized = values / scale
    return np.linspace(normalized.min() - GRID_MARGIN, normalized.max() + GRID_MARGIN, DEFAULT_GRID_POINTS)


def condition_profile(
    f: AdditiveFunction,
    spec: ProgressionSpec,
    mode: PrimeSumMode,
    primes: PrimeSet,
    grid: Optional[Sequence[float]] = None,
    params: Optional[KolmogorovParams] = None,
) -> ConditionProfile:
    """F_n(u) = (1/D) sum of f(p)^2/p over selected p with f(p) < u sqrt(D)."""
    ps = selected_primes(spec, mode, primes)
    values = f.on_primes(ps)
    weights = values * values / ps.astype(np.float64)
    D = descending_sum(ps, weights)
    if D <= 0.0:
        raise DegenerateDistributionError(f"sum of f(p)^2/p vanishes for {f.name}", field="fn")
    scale = math.sqrt(D)

    order = np.argsort(values, kind="stable")
    sorted_values = values[order]
    cumulative = np.concatenate(([0.0], np.cumsum(weights[order])))

    u = np.asarray(grid, dtype=np.float64) if grid is not None else default_grid(values, scale)
    below = np.searchsorted(sorted_values, u * scale, side="left")
    # the sweep total, not D, so the profile ends exactly at 1
    profile = cumulative[below] / cumulative[-1]

    kolmogorov = None
    sup_distance = None
    if params is not None:
        k_values = KolmogorovFunction(params)(u)
        kolmogorov = k_values.tolist()
        sup_distance = float(np.max(np.abs(profile - k_values)))
        logger.info(f"Profile of {f.name} vs K: sup distance {sup_distance:.4g}", extra={"n": spec.n, "k": spec.k})

    return ConditionProfile(
        grid=u.tolist(),
        values=profile.tolist(),
        D=D,
        kolmogorov=kolmogorov,
        sup_distance=sup_distance,
    )
