import math
from enum import Enum
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class PrimeSumMode(str, Enum):
    PAPER_PROGRESSION = "paper_progression"
    DIVISOR_DENSITY = "divisor_density"


class ProgressionSpec(BaseModel):
    """Members m = l, l + k, l + 2k, ... up to n."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=1, description="Modulus")
    l: int = Field(..., ge=1, description="Residue, 1 <= l <= k")
    n: int = Field(..., ge=1, description="Upper bound, n >= l")

    @model_validator(mode="after")
    def check_progression(self) -> "ProgressionSpec":
        if self.l > self.k:
            raise ValueError(f"residue l={self.l} must satisfy 1 <= l <= k={self.k}")
        if math.gcd(self.k, self.l) != 1:
            raise ValueError(f"gcd(k={self.k}, l={self.l}) must be 1")
        if self.n < self.l:
            raise ValueError(f"upper bound n={self.n} is below the residue l={self.l}")
        return self

    @property
    def count(self) -> int:
        return (self.n - self.l) // self.k + 1

    def member(self, t: int) -> int:
        return self.l + self.k * t


class KolmogorovParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    A: float = Field(..., le=0, description="Left end of the support of K")
    C: float = Field(..., ge=0, description="Right end of the support of K")
    mu: float = Field(..., ge=0, description="Mass of K on [A, 0)")
    nu: float = Field(..., ge=0, description="Mass of K on (0, C]")

    @model_validator(mode="after")
    def check_masses(self) -> "KolmogorovParams":
        problems = kolmogorov_param_violations(self.A, self.C, self.mu, self.nu)
        if problems:
            raise ValueError("; ".join(problems))
        return self

    @property
    def sgn_a(self) -> float:
        return float((self.A > 0) - (self.A < 0))

    @property
    def sgn_c(self) -> float:
        return float((self.C > 0) - (self.C < 0))

    @property
    def radicand_factor(self) -> float:
        """2(1 + mu sgn A - nu sgn C), the Q0 coefficient of ln ln p."""
        return 2.0 * (1.0 + self.mu * self.sgn_a - self.nu * self.sgn_c)


def kolmogorov_param_violations(A: float, C: float, mu: float, nu: float) -> List[str]:
    problems: List[str] = []
    if not all(math.isfinite(x) for x in (A, C, mu, nu)):
        problems.append("parameters must be finite")
        return problems
    if A > 0:
        problems.append(f"A={A} must be <= 0")
    if C < 0:
        problems.append(f"C={C} must be >= 0")
    if mu < 0 or nu < 0:
        problems.append(f"mu={mu} and nu={nu} must be >= 0")
    if mu + nu > 1:
        problems.append(f"mu + nu = {mu + nu} exceeds 1")
    if mu > 0 and A >= 0:
        problems.append("mu > 0 requires A < 0")
    if nu > 0 and C <= 0:
        problems.append("nu > 0 requires C > 0")
    return problems


class MomentReport(BaseModel):
    spec: ProgressionSpec = Field(..., description="Progression the statistics were taken over")
    function: str = Field(..., description="Name of the evaluated function")
    count: int = Field(..., description="Number of progression members <= n")
    mean: float = Field(..., description="Empirical mean A(n)")
    central_moments: List[float] = Field(..., description="Central moments for u = 2..max_order")
    max_order: int = Field(..., description="Highest order U")

    @property
    def variance(self) -> float:
        return self.central_moments[0]

    def moment(self, u: int) -> float:
        if u < 2 or u > self.max_order:
            raise KeyError(u)
        return self.central_moments[u - 2]


class PredictedMoments(BaseModel):
    spec: ProgressionSpec = Field(..., description="Progression the prime sums refer to")
    function: str = Field(..., description="Name of the function")
    mode: PrimeSumMode = Field(..., description="Prime index set of the sums")
    orders: List[int] = Field(..., description="Orders u = 1..U")
    sums: List[float] = Field(..., description="S_u = sum of f(p)^u / p")
    B: float = Field(..., description="sqrt(S_2)")
    leading_terms: List[float] = Field(..., description="Reference scale (ln ln n)^u / phi(k) per order")
    prime_count: int = Field(..., description="Number of primes in the index set")

    def sum_for(self, u: int) -> float:
        return self.sums[self.orders.index(u)]


class MertensReport(BaseModel):
    spec: ProgressionSpec
    exact: float = Field(..., description="Sum of 1/p over primes p <= n, p = l mod k")
    leading: float = Field(..., description="ln ln n / phi(k)")
    difference: float = Field(..., description="exact - leading")
    phi_k: int


class BoundedMomentReport(BaseModel):
    spec: ProgressionSpec
    function: str
    sup_abs: float = Field(..., description="sup |f(p)| over the selected primes")
    sup_at: Optional[int] = Field(None, description="Prime attaining the supremum")
    tail_bound: int = Field(..., description="Lower bound n // 10 of the tail window")
    partial_sum_low: float = Field(..., description="Sum of f(p)^2/p up to n // 10")
    partial_sum_high: float = Field(..., description="Sum of f(p)^2/p up to n")
    tail_difference: float
    sup_limit: float
    tail_tolerance: float
    verdict: bool = Field(..., description="True means bounded-moments evidence")


class ClassHPoint(BaseModel):
    n: int
    D: float = Field(..., description="Sum of f(p)^2/p up to n")
    ratio: Optional[float] = Field(None, description="ln D(n) / ln ln n, None when D(n) = 0")


class SmallnessProxy(BaseModel):
    epsilon: float
    B: float
    exceed_fraction: float = Field(..., description="#{p: |f(p)| > eps B(n)} / pi(n)")
    max_ratio: float = Field(..., description="max |f(p)| / B(n)")


class ComparisonRow(BaseModel):
    order: int
    empirical: float
    predicted: float
    ratio: Optional[float] = Field(None, description="empirical / predicted, None when predicted = 0")


class ComparisonReport(BaseModel):
    spec: ProgressionSpec
    function: str
    mode: PrimeSumMode
    rows: List[ComparisonRow]


class ModelMoments(BaseModel):
    mean: float
    variance: float
    central_moments: List[float] = Field(..., description="Central moments for u = 2..max_order")
    cumulants: List[float] = Field(default_factory=list, description="Cumulants for u = 1..max_order")
    max_order: int
    source: Literal["exact", "brute_force", "monte_carlo"]
    trials: Optional[int] = None
    seed: Optional[int] = None
    mean_standard_error: Optional[float] = None
    standard_errors: Optional[List[float]] = Field(None, description="Jackknife errors aligned with central_moments")
    asymptotic_variance: Optional[float] = Field(None, description="Sum of f(p)^2/p")
    max_ratio: Optional[float] = Field(None, description="max |f(p)| / B(n)")

    def moment(self, u: int) -> float:
        if u < 2 or u > self.max_order:
            raise KeyError(u)
        return self.central_moments[u - 2]


class ConditionProfile(BaseModel):
    grid: List[float]
    values: List[float] = Field(..., description="F_n(u) on the grid")
    D: float = Field(..., description="Sum of f(p)^2/p over the selected primes")
    kolmogorov: Optional[List[float]] = Field(None, description="K(u) on the grid when params are given")
    sup_distance: Optional[float] = None


class KSReport(BaseModel):
    n: int
    sample_size: int
    distance: float
    reference: str
    binning_slack: float = 0.0
    extra: Dict[str, float] = Field(default_factory=dict)
