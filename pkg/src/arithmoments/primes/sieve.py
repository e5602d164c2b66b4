import logging
import math
from typing import Iterator, List, Optional, Tuple

import numpy as np

from arithmoments.config import get_settings
from arithmoments.errors import EmptyRangeError, InvalidProgressionError, OutOfRangeError
from arithmoments.models.domain import ProgressionSpec
from arithmoments.primes.types import NO_FACTOR, Factorization, PrimeSet, SpfTable
from arithmoments.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

settings = get_settings()

MAX_BOUND = 10**9


def simple_sieve(limit: int) -> np.ndarray:
    """Non-segmented sieve, primes <= limit as int64."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p : limit + 1 : p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi]; base must hold every prime <= sqrt(hi)."""
    if hi < lo:
        return np.array([], dtype=np.int64)
    mask = np.ones(hi - lo + 1, dtype=bool)
    if lo <= 1:
        mask[: 2 - lo] = False
    for p in base.tolist():
        p2 = p * p
        if p2 > hi:
            break
        start = max(p2, ((lo + p - 1) // p) * p)
        mask[start - lo :: p] = False
    return (lo + np.flatnonzero(mask)).astype(np.int64)


def primes_up_to(n: int, segment_size: Optional[int] = None, workers: Optional[int] = None) -> PrimeSet:
    if n < 2:
        raise EmptyRangeError(f"no primes <= {n}", field="n")
    if n > MAX_BOUND:
        raise OutOfRangeError(f"bound {n} exceeds the supported maximum {MAX_BOUND}", field="n")

    segment_size = segment_size or settings.segment_size
    workers = workers or settings.workers
    base = simple_sieve(math.isqrt(n))

    ranges: List[Tuple[int, int]] = [
        (lo, min(lo + segment_size - 1, n)) for lo in range(2, n + 1, segment_size)
    ]
    logger.debug(f"Sieving primes <= {n} in {len(ranges)} segments")
    parts = ordered_map(lambda r: sieve_segment(r[0], r[1], base), ranges, workers)
    primes = np.concatenate(parts) if parts else np.array([], dtype=np.int64)
    return PrimeSet(bound=n, primes=primes)


def check_progression(k: int, l: int) -> None:
    if k < 1 or not 1 <= l <= k:
        raise InvalidProgressionError(f"need k >= 1 and 1 <= l <= k, got k={k}, l={l}", field="l")
    if math.gcd(k, l) != 1:
        raise InvalidProgressionError(f"gcd(k={k}, l={l}) = {math.gcd(k, l)} is not 1", field="l")


def primes_in_progression(prime_set: PrimeSet, k: int, l: int) -> PrimeSet:
    check_progression(k, l)
    if k == 1:
        return prime_set
    selected = prime_set.primes[prime_set.primes % k == l % k]
    return PrimeSet(bound=prime_set.bound, primes=selected, modulus=k, residue=l)


def primes_coprime_to(prime_set: PrimeSet, k: int) -> PrimeSet:
    """All primes of the set that do not divide k."""
    if k == 1:
        return prime_set
    selected = prime_set.primes[k % prime_set.primes != 0]
    return PrimeSet(bound=prime_set.bound, primes=selected)


def spf_table(lo: int, hi: int, max_span: Optional[int] = None) -> SpfTable:
    max_span = max_span or settings.segment_size
    if lo < 1 or hi < lo:
        raise OutOfRangeError(f"need 1 <= lo <= hi, got [{lo}, {hi}]", field="lo")
    if hi - lo + 1 > max_span:
        raise OutOfRangeError(f"span {hi - lo + 1} exceeds segment size {max_span}", field="hi")

    spf = np.zeros(hi - lo + 1, dtype=np.int64)
    for p in simple_sieve(math.isqrt(hi)).tolist():
        start = ((lo + p - 1) // p) * p
        block = spf[start - lo :: p]
        block[block == NO_FACTOR] = p
    # whatever is still unmarked (and > 1) has no factor <= sqrt(hi)
    unmarked = np.flatnonzero(spf == NO_FACTOR)
    values = lo + unmarked
    spf[unmarked[values >= 2]] = values[values >= 2]
    return SpfTable(lo=lo, hi=hi, spf=spf)


def factorize(m: int, table: SpfTable) -> Factorization:
    if m < 1 or not table.contains(m):
        raise OutOfRangeError(f"{m} is outside the table range [{table.lo}, {table.hi}]", field="m")

    factors: List[Tuple[int, int]] = []
    rest = m
    candidate = 2
    while rest > 1 and table.contains(rest):
        p = table.smallest_factor(rest)
        a = 0
        while rest % p == 0:
            rest //= p
            a += 1
        factors.append((p, a))
        candidate = p + 1

    # the cofactor left the table range: its prime factors all exceed the last tabulated one
    while rest > 1:
        if candidate * candidate > rest:
            factors.append((rest, 1))
            break
        if rest % candidate == 0:
            a = 0
            while rest % candidate == 0:
                rest //= candidate
                a += 1
            factors.append((candidate, a))
        candidate += 1
    return Factorization(m=m, factors=factors)


def is_prime_small(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    for d in range(3, math.isqrt(m) + 1, 2):
        if m % d == 0:
            return False
    return True


def prime_factors_small(m: int) -> List[int]:
    factors: List[int] = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        factors.append(m)
    return factors


def totient(k: int) -> int:
    result = k
    for p in prime_factors_small(k):
        result -= result // p
    return result


def progression_segments(spec: ProgressionSpec, segment_size: Optional[int] = None) -> Iterator[Tuple[int, int]]:
    """Half-open index ranges [t0, t1) of members l + k t, fixed by segment_size only."""
    segment_size = segment_size or settings.segment_size
    total = spec.count
    for t0 in range(0, total, segment_size):
        yield t0, min(t0 + segment_size, total)
