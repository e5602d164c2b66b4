import logging
import math
from typing import List, Optional

import numpy as np

from arithmoments.config import get_settings
from arithmoments.empirical.distribution import EmpiricalDistribution, HistogramAccumulator
from arithmoments.empirical.source import ProgressionValues
from arithmoments.errors import DegenerateDistributionError, EmptyDomainError, OrderLimitError
from arithmoments.functions.types import AdditiveFunction
from arithmoments.models.domain import MomentReport, ProgressionSpec
from arithmoments.primes.types import PrimeSet
from arithmoments.utils.summation import CompensatedSum

logger = logging.getLogger(__name__)

settings = get_settings()

MAX_EMPIRICAL_ORDER = 12


def _centered_power_sums(values: np.ndarray, mean: float, max_order: int) -> List[float]:
    centered = values - mean
    power = centered.copy()
    sums: List[float] = []
    for _ in range(2, max_order + 1):
        power *= centered
        sums.append(math.fsum(power.tolist()))
    return sums


def empirical_moments(
    f: AdditiveFunction,
    spec: ProgressionSpec,
    max_order: int,
    small_primes: Optional[PrimeSet] = None,
    source: Optional[ProgressionValues] = None,
) -> MomentReport:
    """Exact two-pass mean and central moments of f over the progression."""
    if max_order < 2:
        raise OrderLimitError(f"max_order must be >= 2, got {max_order}", field="orders")
    if max_order > MAX_EMPIRICAL_ORDER:
        raise OrderLimitError(
            f"max_order {max_order} exceeds the supported maximum {MAX_EMPIRICAL_ORDER}", field="orders"
        )
    source = source or ProgressionValues(f, spec, small_primes=small_primes)
    count = source.count
    if count <= 0:
        raise EmptyDomainError(f"progression {spec.l} mod {spec.k} has no members <= {spec.n}", field="n")

    total = CompensatedSum()
    for partial in source.map(lambda values: math.fsum(values.tolist())):
        total.add(partial)
    mean = total.value / count

    power_sums = [CompensatedSum() for _ in range(2, max_order + 1)]
    for partials in source.map(lambda values: _centered_power_sums(values, mean, max_order)):
        for acc, partial in zip(power_sums, partials):
            acc.add(partial)

    central = [acc.value / count for acc in power_sums]
    logger.info(
        f"Empirical moments of {f.name} over {count} members: mean={mean:.6g}, variance={central[0]:.6g}",
        extra={"n": spec.n, "k": spec.k},
    )
    return MomentReport(
        spec=spec,
        function=f.name,
        count=count,
        mean=mean,
        central_moments=central,
        max_order=max_order,
    )


def normalized_cdf(
    f: AdditiveFunction,
    spec: ProgressionSpec,
    small_primes: Optional[PrimeSet] = None,
    source: Optional[ProgressionValues] = None,
    report: Optional[MomentReport] = None,
) -> EmpiricalDistribution:
    """Distribution of (f(m) - A(n)) / sqrt(D(n)) over the progression."""
    source = source or ProgressionValues(f, spec, small_primes=small_primes)
    report = report or empirical_moments(f, spec, 2, source=source)
    if report.variance <= 0.0:
        raise DegenerateDistributionError(f"{f.name} is constant on the progression, D(n) = 0", field="fn")

    mean, scale = report.mean, math.sqrt(report.variance)
    if source.count <= settings.sample_limit:
        return EmpiricalDistribution.from_sample((source.all_values() - mean) / scale)

    def segment_histogram(values: np.ndarray) -> HistogramAccumulator:
        acc = HistogramAccumulator(settings.histogram_bins, settings.histogram_range)
        acc.add((values - mean) / scale)
        return acc

    histogram = HistogramAccumulator(settings.histogram_bins, settings.histogram_range)
    for part in source.map(segment_histogram):
        histogram.merge(part)
    logger.info(
        f"Normalized sample of {source.count} values reduced to {settings.histogram_bins} bins",
        extra={"n": spec.n, "k": spec.k},
    )
    return histogram.to_distribution()
