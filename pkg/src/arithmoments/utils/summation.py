import math
from typing import Iterable, List

import numpy as np


class CompensatedSum:
    """Running sum that keeps every partial exactly, like math.fsum.

    Partials are added in call order and folded with math.fsum, so the result
    does not depend on how the caller grouped them.
    """

    def __init__(self) -> None:
        self._partials: List[float] = []

    def add(self, value: float) -> None:
        self._partials.append(float(value))

    def add_array(self, values: np.ndarray) -> None:
        if values.size:
            self._partials.append(math.fsum(values.tolist()))

    def merge(self, other: "CompensatedSum") -> None:
        self._partials.extend(other._partials)

    @property
    def value(self) -> float:
        return math.fsum(self._partials)


def exact_sum(values: Iterable[float] | np.ndarray) -> float:
    if isinstance(values, np.ndarray):
        return math.fsum(values.tolist())
    return math.fsum(values)


def descending_sum(primes: np.ndarray, terms: np.ndarray) -> float:
    """Sum terms ordered by descending prime, smallest contributions first."""
    order = np.argsort(primes, kind="stable")[::-1]
    return math.fsum(terms[order].tolist())
