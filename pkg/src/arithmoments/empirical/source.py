import logging
import math
from typing import Callable, Dict, List, Optional, Tuple, TypeVar

import numpy as np

from arithmoments.config import get_settings
from arithmoments.functions.segment import evaluate_segment
from arithmoments.functions.types import AdditiveFunction
from arithmoments.models.domain import ProgressionSpec
from arithmoments.primes.sieve import primes_up_to, progression_segments
from arithmoments.primes.types import PrimeSet
from arithmoments.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

settings = get_settings()

R = TypeVar("R")


def small_primes_for(n: int) -> PrimeSet:
    """Every prime <= sqrt(n), the table needed to evaluate f on members <= n."""
    return primes_up_to(max(2, math.isqrt(n)))


class ProgressionValues:
    """Segmented f-values over a progression.

    Segment boundaries depend only on segment_size, so any reduction that
    folds per-segment partials in segment order is independent of workers.
    Segment values are kept in memory while the progression fits the sample
    limit, otherwise recomputed on each pass.
    """

    def __init__(
        self,
        f: AdditiveFunction,
        spec: ProgressionSpec,
        small_primes: Optional[PrimeSet] = None,
        segment_size: Optional[int] = None,
        workers: Optional[int] = None,
    ):
        self.f = f
        self.spec = spec
        self.small_primes = small_primes or small_primes_for(spec.n)
        self.segments: List[Tuple[int, int]] = list(progression_segments(spec, segment_size))
        self.workers = workers or settings.workers
        self.cache_values = spec.count <= settings.sample_limit
        self._cache: Dict[int, np.ndarray] = {}

    @property
    def count(self) -> int:
        return self.spec.count

    def segment(self, index: int) -> np.ndarray:
        cached = self._cache.get(index)
        if cached is not None:
            return cached
        t0, t1 = self.segments[index]
        logger.debug(
            f"Evaluating {self.f.name} on members {t0}..{t1 - 1}",
            extra={"segment": index, "n": self.spec.n, "k": self.spec.k},
        )
        values = evaluate_segment(self.f, self.spec, t0, t1, self.small_primes)
        if self.cache_values:
            self._cache[index] = values
        return values

    def map(self, func: Callable[[np.ndarray], R]) -> List[R]:
        """func applied to each segment's values, results in segment order."""
        return ordered_map(lambda i: func(self.segment(i)), range(len(self.segments)), self.workers)

    def all_values(self) -> np.ndarray:
        parts = self.map(lambda values: values)
        return np.concatenate(parts) if parts else np.zeros(0)
