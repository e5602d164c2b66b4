from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from arithmoments.errors import OutOfRangeError

NO_FACTOR = 0


class PrimeSet(BaseModel):
    """Ascending primes <= bound, optionally restricted to p = residue (mod modulus)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bound: int = Field(..., description="Upper bound n")
    primes: np.ndarray = Field(..., description="Ascending int64 array of primes")
    modulus: int = Field(default=1, description="Modulus of the residue filter, 1 when unfiltered")
    residue: int = Field(default=1, description="Residue of the filter")

    def __len__(self) -> int:
        return int(self.primes.size)

    def up_to(self, x: int) -> np.ndarray:
        return self.primes[: int(np.searchsorted(self.primes, x, side="right"))]

    def tolist(self) -> List[int]:
        return [int(p) for p in self.primes]


class SpfTable(BaseModel):
    """Smallest prime factor of every integer in [lo, hi]; spf(1) is NO_FACTOR."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lo: int
    hi: int
    spf: np.ndarray = Field(..., description="int64 array, spf[m - lo]")

    def contains(self, m: int) -> bool:
        return self.lo <= m <= self.hi

    def smallest_factor(self, m: int) -> int:
        if not self.contains(m):
            raise OutOfRangeError(f"{m} is outside the table range [{self.lo}, {self.hi}]", field="m")
        return int(self.spf[m - self.lo])


class Factorization(BaseModel):
    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=1)
    factors: List[Tuple[int, int]] = Field(default_factory=list, description="(prime, exponent), primes ascending")

    def product(self) -> int:
        value = 1
        for p, a in self.factors:
            value *= p**a
        return value
