import math

import numpy as np

from arithmoments.errors import ParameterError
from arithmoments.functions.expressions import parse_rule
from arithmoments.functions.types import AdditiveFunction, apply_rule
from arithmoments.primes.sieve import factorize, simple_sieve
from arithmoments.primes.types import SpfTable

SPOT_CHECK_PRIME_LIMIT = 1000
SPOT_CHECK_MAX_EXPONENT = 6


def strongly_additive_companion(f: AdditiveFunction) -> AdditiveFunction:
    """f* with f*(p^a) = f(p); a strongly additive f is returned as is."""
    if f.strongly_additive:
        return f
    rule = f.rule
    return AdditiveFunction(
        name=f"{f.name}_companion",
        rule=lambda p, a: apply_rule(rule, p, np.ones_like(a)),
        strongly_additive=True,
        description=f"strongly additive companion of {f.name}",
    )


def difference(f: AdditiveFunction, g: AdditiveFunction) -> AdditiveFunction:
    f_rule, g_rule = f.rule, g.rule
    return AdditiveFunction(
        name=f"{f.name}_minus_{g.name}",
        rule=lambda p, a: apply_rule(f_rule, p, a) - apply_rule(g_rule, p, a),
        strongly_additive=f.strongly_additive and g.strongly_additive,
        description=f"{f.name} - {g.name}",
    )


def evaluate(f: AdditiveFunction, m: int, table: SpfTable) -> float:
    """f(m) as the sum of f(p^a) over the prime powers exactly dividing m."""
    factorization = factorize(m, table)
    if not factorization.factors:
        return 0.0
    p = np.array([p for p, _ in factorization.factors], dtype=np.int64)
    a = np.array([a for _, a in factorization.factors], dtype=np.int64)
    return math.fsum(f.values(p, a).tolist())


def agree_on_primes(f: AdditiveFunction, g: AdditiveFunction, primes: np.ndarray) -> bool:
    """True when f(p) = g(p) on every given prime, i.e. f and g share a companion."""
    return bool(np.array_equal(f.on_primes(primes), g.on_primes(primes)))


def custom_function(name: str, kind: str, rule_expression: str) -> AdditiveFunction:
    if kind not in ("additive", "strongly_additive"):
        raise ParameterError(f"kind must be 'additive' or 'strongly_additive', got {kind!r}", field="kind")
    parsed = parse_rule(rule_expression)
    strongly = kind == "strongly_additive"
    rule = (lambda p, a: parsed(p, np.ones_like(a))) if strongly else parsed

    function = AdditiveFunction(
        name=name,
        rule=rule,
        strongly_additive=strongly,
        description=rule_expression,
    )
    check_rule_finite(function)
    return function


def check_rule_finite(f: AdditiveFunction) -> None:
    primes = simple_sieve(SPOT_CHECK_PRIME_LIMIT)
    p = np.repeat(primes, SPOT_CHECK_MAX_EXPONENT)
    a = np.tile(np.arange(1, SPOT_CHECK_MAX_EXPONENT + 1), primes.size)
    values = f.values(p, a)
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ParameterError(
            f"rule of {f.name} is not finite at p={int(p[i])}, a={int(a[i])}", field="rule"
        )
