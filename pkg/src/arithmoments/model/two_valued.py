from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from arithmoments.functions.types import AdditiveFunction
from arithmoments.models.domain import PrimeSumMode, ProgressionSpec
from arithmoments.predictor.sums import selected_primes
from arithmoments.primes.types import PrimeSet


class TwoValuedModel(BaseModel):
    """Independent X_p, equal to values[i] with probability 1/primes[i] and 0 otherwise."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    primes: np.ndarray = Field(..., description="Ascending primes, one per entry")
    values: np.ndarray = Field(..., description="f(p) per entry")
    spec: ProgressionSpec
    mode: PrimeSumMode
    function: str

    def __len__(self) -> int:
        return int(self.primes.size)

    @property
    def probabilities(self) -> np.ndarray:
        return 1.0 / self.primes.astype(np.float64)

    def entries(self) -> List[Tuple[int, float, float]]:
        return [(int(p), float(v), 1.0 / int(p)) for p, v in zip(self.primes, self.values)]

    def concat(self, other: "TwoValuedModel") -> "TwoValuedModel":
        """Union of two models over disjoint primes, entries kept ascending."""
        primes = np.concatenate([self.primes, other.primes])
        if np.unique(primes).size != primes.size:
            raise ValueError("models share a prime")
        order = np.argsort(primes, kind="stable")
        values = np.concatenate([self.values, other.values])
        return self.model_copy(update={"primes": primes[order], "values": values[order]})


def build_model(
    f: AdditiveFunction,
    primes: PrimeSet,
    spec: ProgressionSpec,
    mode: PrimeSumMode = PrimeSumMode.PAPER_PROGRESSION,
    drop_zero: bool = True,
) -> TwoValuedModel:
    """One entry per selected prime with value f(p); zero values carry no mass and are dropped."""
    ps = selected_primes(spec, mode, primes)
    values = f.on_primes(ps)
    if drop_zero:
        keep = values != 0.0
        ps, values = ps[keep], values[keep]
    return TwoValuedModel(primes=ps, values=values, spec=spec, mode=mode, function=f.name)
