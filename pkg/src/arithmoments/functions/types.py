from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from arithmoments.models.domain import KolmogorovParams

Rule = Callable[[np.ndarray, np.ndarray], np.ndarray]

Q0, Q1, Q2 = 0, 1, 2


def apply_rule(rule: Rule, p: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Call a rule and broadcast the result to float64 of p's shape."""
    p = np.asarray(p, dtype=np.int64)
    a = np.asarray(a, dtype=np.int64)
    values = np.asarray(rule(p, a), dtype=np.float64)
    return np.broadcast_to(values, np.broadcast_shapes(p.shape, a.shape)).astype(np.float64)


class AdditiveFunction(BaseModel):
    """Additive f given by its values on prime powers: f(m) = sum of f(p^a) over p^a || m."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str = Field(..., description="Identifier")
    rule: Rule = Field(..., description="Vectorized (p, a) -> f(p^a)")
    strongly_additive: bool = Field(..., description="f(p^a) = f(p) for all a >= 1")
    description: Optional[str] = Field(None, description="Human-readable definition")

    def values(self, p: np.ndarray, a: np.ndarray) -> np.ndarray:
        return apply_rule(self.rule, p, a)

    def on_primes(self, primes: np.ndarray) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        return apply_rule(self.rule, primes, np.ones_like(primes))

    def at(self, p: int, a: int = 1) -> float:
        return float(apply_rule(self.rule, np.array([p]), np.array([a]))[0])


class PrimeClassAssignment(BaseModel):
    """Partition of a prime set into the classes Q0, Q1, Q2 (labels 0, 1, 2)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    primes: np.ndarray = Field(..., description="Ascending primes that were classified")
    labels: np.ndarray = Field(..., description="int8 label per prime")
    params: KolmogorovParams
    k: int
    bound: int
    target_q1: float = Field(..., description="Target Q1 count at the bound")
    target_q2: float = Field(..., description="Target Q2 count at the bound")
    target_q0: float = Field(..., description="Asymptotic Q0 count n / (phi(k) ln n)")

    def count(self, label: int) -> int:
        return int(np.count_nonzero(self.labels == label))

    def label_of(self, primes: np.ndarray) -> np.ndarray:
        """Labels for arbitrary primes; primes outside the assignment are Q0."""
        primes = np.asarray(primes, dtype=np.int64)
        if self.primes.size == 0:
            return np.zeros(primes.shape, dtype=np.int8)
        idx = np.searchsorted(self.primes, primes)
        clipped = np.minimum(idx, self.primes.size - 1)
        found = self.primes[clipped] == primes
        return np.where(found, self.labels[clipped], Q0).astype(np.int8)

    def relative_error(self, label: int) -> float:
        target = {Q0: self.target_q0, Q1: self.target_q1, Q2: self.target_q2}[label]
        realized = self.count(label)
        if target == 0:
            return 0.0 if realized == 0 else float("inf")
        return abs(realized - target) / target
