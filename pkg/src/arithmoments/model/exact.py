import logging
import math
from typing import List

import numpy as np

from arithmoments.errors import OrderLimitError
from arithmoments.model.cumulants import MAX_CUMULANT_ORDER, central_from_cumulants, cumulants_from_moments
from arithmoments.model.two_valued import TwoValuedModel
from arithmoments.models.domain import ModelMoments
from arithmoments.utils.summation import descending_sum, exact_sum

logger = logging.getLogger(__name__)

MAX_BRUTE_FORCE_ENTRIES = 16


def _check_order(max_order: int, limit: int) -> None:
    if max_order < 2:
        raise OrderLimitError(f"max_order must be >= 2, got {max_order}", field="orders")
    if max_order > limit:
        raise OrderLimitError(f"max_order {max_order} exceeds the supported maximum {limit}", field="orders")


def entry_central_moments(model: TwoValuedModel, max_order: int) -> List[np.ndarray]:
    """Two-point central moments of every X_p for u = 1..max_order."""
    q = model.probabilities
    mean = model.values * q
    low, high = -mean, model.values - mean
    return [(1.0 - q) * low**u + q * high**u for u in range(1, max_order + 1)]


def asymptotic_summary(model: TwoValuedModel) -> tuple[float, float | None]:
    """Sum of f(p)^2/p and max |f(p)| / B(n)."""
    if len(model) == 0:
        return 0.0, None
    D = descending_sum(model.primes, model.values**2 * model.probabilities)
    if D == 0.0:
        return D, None
    return D, float(np.abs(model.values).max()) / math.sqrt(D)


def exact_moments(model: TwoValuedModel, max_order: int) -> ModelMoments:
    """Moments of S_n by summing per-entry cumulants across the independent X_p."""
    _check_order(max_order, MAX_CUMULANT_ORDER)

    per_entry = entry_central_moments(model, max_order)
    per_entry[0] = np.zeros_like(per_entry[0])
    # cumulants of order >= 2 are shift invariant, so central moments feed the recursion directly
    kappas = cumulants_from_moments(per_entry)
    mean = descending_sum(model.primes, model.values * model.probabilities)
    totals = [mean] + [descending_sum(model.primes, kappa) for kappa in kappas[1:]]

    central = central_from_cumulants(totals)[1:]
    asymptotic, max_ratio = asymptotic_summary(model)
    return ModelMoments(
        mean=mean,
        variance=central[0],
        central_moments=central,
        cumulants=totals,
        max_order=max_order,
        source="exact",
        asymptotic_variance=asymptotic,
        max_ratio=max_ratio,
    )


def brute_force_moments(model: TwoValuedModel, max_order: int) -> ModelMoments:
    """Moments by enumerating all 2^t outcomes; an oracle for small models."""
    _check_order(max_order, MAX_CUMULANT_ORDER)
    t = len(model)
    if t > MAX_BRUTE_FORCE_ENTRIES:
        raise OrderLimitError(f"{t} entries exceed the enumeration limit {MAX_BRUTE_FORCE_ENTRIES}", field="model")

    outcomes = (np.arange(2**t, dtype=np.int64)[:, None] >> np.arange(t)) & 1
    q = model.probabilities
    weights = np.prod(np.where(outcomes == 1, q, 1.0 - q), axis=1)
    totals = (outcomes * model.values).sum(axis=1)

    mean = exact_sum(weights * totals)
    central = [exact_sum(weights * (totals - mean) ** u) for u in range(2, max_order + 1)]
    return ModelMoments(
        mean=mean,
        variance=central[0],
        central_moments=central,
        max_order=max_order,
        source="brute_force",
    )
