import math

import numpy as np

from arithmoments.errors import OutOfRangeError
from arithmoments.functions.types import AdditiveFunction
from arithmoments.models.domain import ProgressionSpec
from arithmoments.primes.types import PrimeSet


def evaluate_segment(
    f: AdditiveFunction,
    spec: ProgressionSpec,
    t0: int,
    t1: int,
    small_primes: PrimeSet,
) -> np.ndarray:
    """f(l + k t) for t in [t0, t1).

    Sieves the block by every prime power p^a <= max member with p not
    dividing k, adding f(p^a) - f(p^(a-1)) and dividing the cofactor by p.
    Every block sieves with the primes up to the square root of the largest
    member of the whole progression, so the result does not depend on how
    [0, count) is split. Whatever cofactor remains is a single prime above it.
    """
    if t1 <= t0:
        return np.zeros(0, dtype=np.float64)
    if t0 < 0 or t1 > spec.count:
        raise OutOfRangeError(f"index range [{t0}, {t1}) outside [0, {spec.count})", field="segment")

    k, l = spec.k, spec.l
    members = l + k * np.arange(t0, t1, dtype=np.int64)
    hi = int(members[-1])
    root = math.isqrt(spec.member(spec.count - 1))
    if small_primes.bound < root:
        raise OutOfRangeError(f"small primes end at {small_primes.bound}, need {root}", field="small_primes")

    ps = small_primes.up_to(root)
    ps = ps[k % ps != 0]

    values = np.zeros(members.size, dtype=np.float64)
    rest = members.copy()

    level = 1
    active = ps
    while active.size:
        exponents = np.full(active.size, level, dtype=np.int64)
        delta = f.values(active, exponents)
        if level > 1:
            delta = delta - f.values(active, exponents - 1)
        for p, d in zip(active.tolist(), delta.tolist()):
            q = p**level
            # first t >= t0 with l + k t = 0 (mod q)
            r = (-l * pow(k, -1, q)) % q
            start = (r - t0) % q
            if start >= members.size:
                continue
            if d != 0.0:
                values[start::q] += d
            rest[start::q] //= p
        level += 1
        active = active[active**level <= hi]

    large = rest > 1
    if large.any():
        big = rest[large]
        values[large] += f.values(big, np.ones_like(big))
    return values
