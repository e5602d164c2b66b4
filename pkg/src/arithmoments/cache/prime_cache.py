import logging
import re
import struct
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from arithmoments.config import get_settings
from arithmoments.errors import CacheError
from arithmoments.primes.sieve import primes_up_to
from arithmoments.primes.types import PrimeSet
from arithmoments.utils.hashing import sha256_digest

logger = logging.getLogger(__name__)

settings = get_settings()

MAGIC = b"AMPS"
VERSION = 1
HEADER = struct.Struct("<4sHQQ32s")
CACHE_NAME = re.compile(r"^primes_(\d+)\.bin$")


def get_cache_dir() -> Path:
    cache_dir = Path(settings.cache_dir) / "primes"
    cache_dir.mkdir(parents=True, exist_ok=True)
    return cache_dir


def get_cache_path(bound: int) -> Path:
    return get_cache_dir() / f"primes_{bound}.bin"


def encode_prime_set(prime_set: PrimeSet) -> bytes:
    gaps = np.diff(prime_set.primes, prepend=0)
    if gaps.size and int(gaps.max()) > np.iinfo(np.uint16).max:
        raise CacheError(f"prime gap {int(gaps.max())} does not fit the uint16 encoding")
    payload = gaps.astype("<u2").tobytes()
    header = HEADER.pack(MAGIC, VERSION, prime_set.bound, int(gaps.size), sha256_digest(payload))
    return header + payload


def decode_prime_set(data: bytes, expected_bound: Optional[int] = None) -> PrimeSet:
    if len(data) < HEADER.size:
        raise CacheError("prime cache is truncated")
    magic, version, bound, count, checksum = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheError(f"bad magic {magic!r}")
    if version != VERSION:
        raise CacheError(f"unsupported cache version {version}")
    if expected_bound is not None and bound != expected_bound:
        raise CacheError(f"cache holds bound {bound}, expected {expected_bound}")

    payload = data[HEADER.size :]
    if len(payload) != 2 * count:
        raise CacheError(f"payload holds {len(payload) // 2} gaps, header says {count}")
    if sha256_digest(payload) != checksum:
        raise CacheError("prime cache checksum mismatch")

    primes = np.cumsum(np.frombuffer(payload, dtype="<u2").astype(np.int64))
    return PrimeSet(bound=bound, primes=primes)


def save_prime_set(prime_set: PrimeSet, path: Optional[Path] = None) -> Path:
    path = path or get_cache_path(prime_set.bound)
    tmp_path = path.with_suffix(".tmp")
    tmp_path.write_bytes(encode_prime_set(prime_set))
    tmp_path.replace(path)
    return path


def load_prime_set(path: Path, expected_bound: Optional[int] = None) -> PrimeSet:
    if not path.exists():
        raise CacheError(f"prime cache not found: {path}")
    return decode_prime_set(path.read_bytes(), expected_bound=expected_bound)


def find_covering_cache(n: int) -> Optional[Tuple[int, Path]]:
    """Smallest cached bound >= n, with the bound its file name claims."""
    best: Optional[Tuple[int, Path]] = None
    for path in get_cache_dir().iterdir():
        match = CACHE_NAME.match(path.name)
        if not match:
            continue
        bound = int(match.group(1))
        if bound >= n and (best is None or bound < best[0]):
            best = (bound, path)
    return best


def load_or_build_primes(n: int, force: bool = False) -> PrimeSet:
    if not settings.prime_cache_enabled:
        return primes_up_to(n)

    if not force:
        covering = find_covering_cache(n)
        if covering is not None:
            bound, path = covering
            try:
                # the header bound must match the file name
                cached = load_prime_set(path, expected_bound=bound)
                if cached.bound < n:
                    raise CacheError(f"cache bound {cached.bound} is below {n}")
                logger.info(f"Cache hit for primes <= {n} in {path.name}", extra={"n": n})
                if cached.bound == n:
                    return cached
                return PrimeSet(bound=n, primes=cached.up_to(n))
            except CacheError as e:
                logger.warning(f"Discarding prime cache {path.name}: {e}", extra={"n": n})

    prime_set = primes_up_to(n)
    path = save_prime_set(prime_set)
    logger.info(f"Cache miss - sieved and cached {len(prime_set)} primes <= {n}", extra={"n": n})
    return prime_set
