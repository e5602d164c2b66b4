from typing import Callable, Optional

import numpy as np

CDF = Callable[[np.ndarray], np.ndarray]


class EmpiricalDistribution:
    """Right-continuous empirical CDF of normalized values.

    Backed either by the sorted sample or, above the sample limit, by a
    fixed-width histogram over [-half_range, half_range] with one outlier
    tail bin on each side.
    """

    def __init__(
        self,
        size: int,
        sample: Optional[np.ndarray] = None,
        edges: Optional[np.ndarray] = None,
        counts: Optional[np.ndarray] = None,
        below: int = 0,
        above: int = 0,
    ):
        if (sample is None) == (edges is None):
            raise ValueError("exactly one of sample or histogram must be given")
        self.size = size
        self.sample = sample
        self.edges = edges
        self.counts = counts
        self.below = below
        self.above = above

    @classmethod
    def from_sample(cls, values: np.ndarray) -> "EmpiricalDistribution":
        sample = np.sort(np.asarray(values, dtype=np.float64), kind="stable")
        return cls(size=int(sample.size), sample=sample)

    @property
    def is_histogram(self) -> bool:
        return self.sample is None

    @property
    def binning_slack(self) -> float:
        """Largest probability mass of a single bin, 0 for a sample."""
        if self.sample is not None or self.size == 0:
            return 0.0
        assert self.counts is not None
        largest = max(int(self.counts.max(initial=0)), self.below, self.above)
        return largest / self.size

    def cdf(self, x: np.ndarray | float) -> np.ndarray:
        """P(X <= x); for a histogram, the mass up to the end of x's bin."""
        x = np.asarray(x, dtype=np.float64)
        if self.size == 0:
            return np.zeros(x.shape)
        if self.sample is not None:
            return np.searchsorted(self.sample, x, side="right") / self.size

        assert self.edges is not None and self.counts is not None
        cumulative = self.below + np.concatenate(([0], np.cumsum(self.counts)))
        # bins are [e_j, e_j+1), the last one closed
        j = np.searchsorted(self.edges, x, side="right")
        through = cumulative[np.clip(j, 0, self.counts.size)]
        values = np.where(x < self.edges[0], self.below, through).astype(np.float64)
        values = np.where(x > self.edges[-1], self.size, values)
        return values / self.size

    def left_cdf(self, x: np.ndarray) -> np.ndarray:
        """P(X < x) at histogram edges."""
        assert self.edges is not None and self.counts is not None
        cumulative = self.below + np.concatenate(([0], np.cumsum(self.counts)))
        j = np.searchsorted(self.edges, x, side="left")
        return cumulative[np.clip(j, 0, self.counts.size)] / self.size

    def mean(self) -> float:
        if self.sample is None:
            raise ValueError("mean is only available for sample-backed distributions")
        return float(np.mean(self.sample)) if self.size else 0.0

    def variance(self) -> float:
        if self.sample is None:
            raise ValueError("variance is only available for sample-backed distributions")
        return float(np.var(self.sample)) if self.size else 0.0


class HistogramAccumulator:
    def __init__(self, bins: int, half_range: float):
        self.edges = np.linspace(-half_range, half_range, bins + 1)
        self.counts = np.zeros(bins, dtype=np.int64)
        self.below = 0
        self.above = 0
        self.size = 0

    def add(self, values: np.ndarray) -> None:
        lo, hi = self.edges[0], self.edges[-1]
        self.below += int(np.count_nonzero(values < lo))
        self.above += int(np.count_nonzero(values > hi))
        counts, _ = np.histogram(values, bins=self.edges)
        self.counts += counts
        self.size += int(values.size)

    def merge(self, other: "HistogramAccumulator") -> None:
        self.counts += other.counts
        self.below += other.below
        self.above += other.above
        self.size += other.size

    def to_distribution(self) -> EmpiricalDistribution:
        return EmpiricalDistribution(
            size=self.size,
            edges=self.edges,
            counts=self.counts.copy(),
            below=self.below,
            above=self.above,
        )
