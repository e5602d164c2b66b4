import logging
import math

import numpy as np

from arithmoments.errors import ParameterError
from arithmoments.functions.types import Q0, Q1, Q2, AdditiveFunction, PrimeClassAssignment
from arithmoments.models.domain import KolmogorovParams
from arithmoments.primes.sieve import totient
from arithmoments.primes.types import PrimeSet

logger = logging.getLogger(__name__)

# below 16, ln ln p is not usable (negative or tiny), such primes stay in Q0 with f(p) = 0
CLASS_THRESHOLD = 16


def class_coefficients(params: KolmogorovParams, k: int) -> tuple[float, float]:
    """Coefficients c with target count c x / (ln x ln ln x) for Q1 and Q2."""
    phi = totient(k)
    c1 = 2.0 * params.mu / (phi * params.A**2) if params.A * params.mu != 0 else 0.0
    c2 = 2.0 * params.nu / (phi * params.C**2) if params.C * params.nu != 0 else 0.0
    return c1, c2


def target_count(coefficient: float, x: float) -> float:
    if coefficient == 0.0 or x < CLASS_THRESHOLD:
        return 0.0
    return coefficient * x / (math.log(x) * math.log(math.log(x)))


def build_prime_classes(primes: PrimeSet, params: KolmogorovParams, k: int) -> PrimeClassAssignment:
    """Greedy ascending scan: Q1 while below its target at p, then Q2, else Q0."""
    ps = primes.primes
    c1, c2 = class_coefficients(params, k)
    labels = np.zeros(ps.size, dtype=np.int8)

    eligible = np.flatnonzero(ps >= CLASS_THRESHOLD)
    if eligible.size and (c1 or c2):
        x = ps[eligible].astype(np.float64)
        scale = x / (np.log(x) * np.log(np.log(x)))
        n1 = n2 = 0
        for i, t1, t2 in zip(eligible.tolist(), (c1 * scale).tolist(), (c2 * scale).tolist()):
            if n1 < t1:
                labels[i] = Q1
                n1 += 1
            elif n2 < t2:
                labels[i] = Q2
                n2 += 1

    bound = primes.bound
    target_q0 = bound / (totient(k) * math.log(bound)) if bound >= 2 else 0.0
    assignment = PrimeClassAssignment(
        primes=ps,
        labels=labels,
        params=params,
        k=k,
        bound=bound,
        target_q1=target_count(c1, bound),
        target_q2=target_count(c2, bound),
        target_q0=target_q0,
    )
    logger.info(
        f"Prime classes up to {bound}: Q0={assignment.count(Q0)} Q1={assignment.count(Q1)} Q2={assignment.count(Q2)}",
        extra={"n": bound, "k": k},
    )
    return assignment


def kolmogorov_example_function(params: KolmogorovParams, assignment: PrimeClassAssignment) -> AdditiveFunction:
    """Strongly additive f with f(p) = sqrt(r ln ln p) on Q0, A ln ln p on Q1, C ln ln p on Q2.

    r = 2(1 + mu sgn A - nu sgn C); f(p) = 0 for p < 16.
    """
    if assignment.count(Q1) and params.A == 0:
        raise ParameterError("Q1 is nonempty but A = 0", field="A")
    if assignment.count(Q2) and params.C == 0:
        raise ParameterError("Q2 is nonempty but C = 0", field="C")
    radicand = params.radicand_factor
    q0_used = bool(np.any((assignment.labels == Q0) & (assignment.primes >= CLASS_THRESHOLD)))
    if radicand < 0 and q0_used:
        raise ParameterError(f"negative radicand factor {radicand} with a nonempty Q0", field="params")

    A, C = params.A, params.C

    def rule(p: np.ndarray, a: np.ndarray) -> np.ndarray:
        labels = assignment.label_of(p)
        lnln = np.log(np.log(np.maximum(p, CLASS_THRESHOLD).astype(np.float64)))
        value = np.select(
            [labels == Q1, labels == Q2],
            [A * lnln, C * lnln],
            np.sqrt(np.maximum(radicand * lnln, 0.0)),
        )
        return np.where(p >= CLASS_THRESHOLD, value, 0.0)

    return AdditiveFunction(
        name="kolmogorov_example",
        rule=rule,
        strongly_additive=True,
        description=f"Kolmogorov example, A={A}, C={C}, mu={params.mu}, nu={params.nu}",
    )
