import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from arithmoments.config import get_settings
from arithmoments.errors import EmptyRangeError, OrderLimitError, ParameterError
from arithmoments.functions.types import AdditiveFunction
from arithmoments.models.domain import (
    BoundedMomentReport,
    ClassHPoint,
    ComparisonReport,
    ComparisonRow,
    MertensReport,
    MomentReport,
    PredictedMoments,
    PrimeSumMode,
    ProgressionSpec,
    SmallnessProxy,
)
from arithmoments.primes.sieve import primes_coprime_to, primes_in_progression, totient
from arithmoments.primes.types import PrimeSet
from arithmoments.utils.summation import descending_sum

logger = logging.getLogger(__name__)

settings = get_settings()


def lnln(n: float) -> float:
    """ln ln n, NaN where it is undefined (n <= 1)."""
    if n <= 1:
        return math.nan
    return math.log(math.log(n))


def selected_primes(spec: ProgressionSpec, mode: PrimeSumMode, primes: PrimeSet) -> np.ndarray:
    """Index set of the prime sums: p = l (mod k), or every p not dividing k."""
    if primes.bound < spec.n:
        raise EmptyRangeError(f"prime set ends at {primes.bound}, below n={spec.n}", field="n")
    upto = PrimeSet(bound=spec.n, primes=primes.up_to(spec.n))
    if mode == PrimeSumMode.PAPER_PROGRESSION:
        return primes_in_progression(upto, spec.k, spec.l).primes
    return primes_coprime_to(upto, spec.k).primes


def _power_sums(values: np.ndarray, ps: np.ndarray, max_order: int) -> List[float]:
    inverse = 1.0 / ps.astype(np.float64)
    sums: List[float] = []
    power = np.ones_like(values)
    for _ in range(max_order):
        power = power * values
        sums.append(descending_sum(ps, power * inverse))
    return sums


def moment_sums(
    f: AdditiveFunction,
    spec: ProgressionSpec,
    mode: PrimeSumMode,
    max_order: int,
    primes: PrimeSet,
) -> PredictedMoments:
    """S_u = sum of f(p)^u / p over the selected primes for u = 1..max_order."""
    if max_order < 1:
        raise OrderLimitError(f"max_order must be >= 1, got {max_order}", field="orders")
    ps = selected_primes(spec, mode, primes)
    sums = _power_sums(f.on_primes(ps), ps, max(max_order, 2))
    B = math.sqrt(max(sums[1], 0.0))
    sums = sums[:max_order]

    scale = lnln(spec.n)
    phi = totient(spec.k) if mode == PrimeSumMode.PAPER_PROGRESSION else 1
    leading = [scale**u / phi for u in range(1, max_order + 1)]

    return PredictedMoments(
        spec=spec,
        function=f.name,
        mode=mode,
        orders=list(range(1, max_order + 1)),
        sums=sums,
        B=B,
        leading_terms=leading,
        prime_count=int(ps.size),
    )


def mertens_progression(spec: ProgressionSpec, primes: PrimeSet) -> MertensReport:
    ps = selected_primes(spec, PrimeSumMode.PAPER_PROGRESSION, primes)
    exact = descending_sum(ps, 1.0 / ps.astype(np.float64))
    phi = totient(spec.k)
    leading = lnln(spec.n) / phi
    return MertensReport(spec=spec, exact=exact, leading=leading, difference=exact - leading, phi_k=phi)


def bounded_moment_check(
    f: AdditiveFunction,
    spec: ProgressionSpec,
    primes: PrimeSet,
    mode: PrimeSumMode = PrimeSumMode.PAPER_PROGRESSION,
) -> BoundedMomentReport:
    """Evidence that sup |f(p)| is finite and sum f(p)^2/p has converged by n."""
    if not f.strongly_additive:
        raise ParameterError(f"{f.name} is not strongly additive, check its companion instead", field="fn")
    ps = selected_primes(spec, mode, primes)
    values = f.on_primes(ps)
    terms = values * values / ps.astype(np.float64)

    tail_bound = spec.n // 10
    low = ps <= tail_bound
    partial_low = descending_sum(ps[low], terms[low])
    partial_high = descending_sum(ps, terms)

    if ps.size:
        i = int(np.argmax(np.abs(values)))
        sup_abs, sup_at = float(abs(values[i])), int(ps[i])
    else:
        sup_abs, sup_at = 0.0, None

    tail = partial_high - partial_low
    sup_limit = settings.bounded_sup_limit
    tolerance = settings.bounded_tail_tolerance
    verdict = bool(math.isfinite(sup_abs) and sup_abs <= sup_limit and abs(tail) < tolerance)
    return BoundedMomentReport(
        spec=spec,
        function=f.name,
        sup_abs=sup_abs,
        sup_at=sup_at,
        tail_bound=tail_bound,
        partial_sum_low=partial_low,
        partial_sum_high=partial_high,
        tail_difference=tail,
        sup_limit=sup_limit,
        tail_tolerance=tolerance,
        verdict=verdict,
    )


def xp_central_moment(fp: float, p: int, u: int) -> float:
    """E[(X_p - fp/p)^u] for X_p = fp with probability 1/p, else 0."""
    if p < 2:
        raise ParameterError(f"p must be a prime >= 2, got {p}", field="p")
    if u < 1:
        raise OrderLimitError(f"order must be >= 1, got {u}", field="u")
    q = 1.0 / p
    mean = fp * q
    return (1.0 - q) * (-mean) ** u + q * (fp - mean) ** u


def floor_mean(f: AdditiveFunction, n: int, primes: PrimeSet) -> float:
    """Sum of f(p) floor(n/p) / n over p <= n, the exact mean of a strongly additive f on 1..n."""
    ps = primes.up_to(n)
    counts = (n // ps).astype(np.float64)
    return descending_sum(ps, f.on_primes(ps) * counts) / n


def class_h_profile(
    f: AdditiveFunction,
    spec: ProgressionSpec,
    mode: PrimeSumMode,
    primes: PrimeSet,
    bounds: Sequence[int],
) -> List[ClassHPoint]:
    """ln D(n) / ln ln n at each bound, finite evidence for ln D(n) = o(ln ln n)."""
    ps = selected_primes(spec, mode, primes)
    values = f.on_primes(ps)
    terms = values * values / ps.astype(np.float64)

    points: List[ClassHPoint] = []
    for bound in sorted(bounds):
        if bound > spec.n:
            raise EmptyRangeError(f"bound {bound} exceeds n={spec.n}", field="bounds")
        mask = ps <= bound
        D = descending_sum(ps[mask], terms[mask])
        scale = lnln(bound)
        ratio: Optional[float] = None
        if D > 0 and scale > 0:
            ratio = math.log(D) / scale
        points.append(ClassHPoint(n=bound, D=D, ratio=ratio))
    return points


def smallness_proxy(
    f: AdditiveFunction,
    spec: ProgressionSpec,
    mode: PrimeSumMode,
    primes: PrimeSet,
    epsilon: float,
) -> SmallnessProxy:
    """#{p: |f(p)| > eps B(n)} / pi(n) and max |f(p)| / B(n); the count runs over the selected primes."""
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}", field="epsilon")
    ps = selected_primes(spec, mode, primes)
    values = np.abs(f.on_primes(ps))
    B = math.sqrt(descending_sum(ps, values * values / ps.astype(np.float64)))
    prime_count = primes.up_to(spec.n).size
    if ps.size == 0 or B == 0.0:
        return SmallnessProxy(epsilon=epsilon, B=B, exceed_fraction=0.0, max_ratio=0.0)
    return SmallnessProxy(
        epsilon=epsilon,
        B=B,
        exceed_fraction=float(np.count_nonzero(values > epsilon * B)) / prime_count,
        max_ratio=float(values.max()) / B,
    )


def compare(report: MomentReport, predicted: PredictedMoments) -> ComparisonReport:
    """Per-order ratios: the mean against S_1, central moments against S_u."""
    rows: List[ComparisonRow] = []
    for u in predicted.orders:
        if u == 1:
            empirical = report.mean
        elif u <= report.max_order:
            empirical = report.moment(u)
        else:
            continue
        target = predicted.sum_for(u)
        rows.append(
            ComparisonRow(
                order=u,
                empirical=empirical,
                predicted=target,
                ratio=empirical / target if target != 0 else None,
            )
        )
    return ComparisonReport(spec=report.spec, function=report.function, mode=predicted.mode, rows=rows)
