from typing import Callable

import numpy as np
from scipy import stats

from arithmoments.empirical.distribution import EmpiricalDistribution
from arithmoments.errors import EmptyDomainError
from arithmoments.models.domain import KSReport

RefCDF = Callable[[np.ndarray], np.ndarray]


def ks_distance(emp: EmpiricalDistribution, ref_cdf: RefCDF) -> float:
    """sup |F_emp - ref| at the order statistics; histograms add their binning slack."""
    if emp.size == 0:
        raise EmptyDomainError("empirical distribution is empty", field="sample")
    if emp.sample is not None:
        return float(stats.kstest(emp.sample, ref_cdf, method="asymp").statistic)

    assert emp.edges is not None
    ref = np.asarray(ref_cdf(emp.edges), dtype=np.float64)
    right = np.abs(emp.cdf(emp.edges) - ref)
    left = np.abs(emp.left_cdf(emp.edges) - ref)
    return float(max(right.max(), left.max())) + emp.binning_slack


def _support(emp: EmpiricalDistribution) -> np.ndarray:
    if emp.sample is not None:
        return emp.sample
    assert emp.edges is not None
    return emp.edges


def ks_two_sample(a: EmpiricalDistribution, b: EmpiricalDistribution) -> float:
    """sup |F_a - F_b| over both supports; each histogram side adds its binning slack."""
    if a.size == 0 or b.size == 0:
        raise EmptyDomainError("empirical distribution is empty", field="sample")
    if a.sample is not None and b.sample is not None:
        return float(stats.ks_2samp(a.sample, b.sample, method="asymp").statistic)

    # both CDFs are right-continuous steps, so the sup sits at a jump of one of them
    points = np.unique(np.concatenate([_support(a), _support(b)]))
    distance = float(np.abs(a.cdf(points) - b.cdf(points)).max())
    return distance + a.binning_slack + b.binning_slack


def ks_report(emp: EmpiricalDistribution, ref_cdf: RefCDF, n: int, reference: str) -> KSReport:
    return KSReport(
        n=n,
        sample_size=emp.size,
        distance=ks_distance(emp, ref_cdf),
        reference=reference,
        binning_slack=emp.binning_slack,
    )


def ks_two_sample_report(emp: EmpiricalDistribution, other: EmpiricalDistribution, n: int, reference: str) -> KSReport:
    return KSReport(
        n=n,
        sample_size=emp.size,
        distance=ks_two_sample(emp, other),
        reference=reference,
        binning_slack=emp.binning_slack + other.binning_slack,
    )
