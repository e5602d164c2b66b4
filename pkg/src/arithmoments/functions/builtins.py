from typing import Callable, Dict, List

import numpy as np

from arithmoments.errors import FunctionLookupError
from arithmoments.functions.types import AdditiveFunction

LOG_POWER_EXPONENT = 2


def _omega() -> AdditiveFunction:
    return AdditiveFunction(
        name="omega",
        rule=lambda p, a: np.ones(p.shape),
        strongly_additive=True,
        description="number of distinct prime factors, f(p^a) = 1",
    )


def _big_omega() -> AdditiveFunction:
    return AdditiveFunction(
        name="big_omega",
        rule=lambda p, a: a.astype(np.float64),
        strongly_additive=False,
        description="prime factors with multiplicity, f(p^a) = a",
    )


def _omega_diff() -> AdditiveFunction:
    return AdditiveFunction(
        name="omega_diff",
        rule=lambda p, a: (a - 1).astype(np.float64),
        strongly_additive=False,
        description="Omega - omega, f(p^a) = a - 1",
    )


def _half_omega_diff() -> AdditiveFunction:
    return AdditiveFunction(
        name="half_omega_diff",
        rule=lambda p, a: 0.5 * (a - 1),
        strongly_additive=False,
        description="(Omega - omega) / 2, a non-integer function vanishing on primes",
    )


def _log_phi_ratio() -> AdditiveFunction:
    return AdditiveFunction(
        name="log_phi_ratio",
        rule=lambda p, a: np.log1p(-1.0 / p),
        strongly_additive=True,
        description="ln(phi(m)/m), f(p) = ln(1 - 1/p)",
    )


def _big_omega_minus_log_phi_ratio() -> AdditiveFunction:
    return AdditiveFunction(
        name="big_omega_minus_log_phi_ratio",
        rule=lambda p, a: a - np.log1p(-1.0 / p),
        strongly_additive=False,
        description="Omega(m) - ln(phi(m)/m), f(p^a) = a - ln(1 - 1/p)",
    )


def _log_m() -> AdditiveFunction:
    return AdditiveFunction(
        name="log_m",
        rule=lambda p, a: a * np.log(p),
        strongly_additive=False,
        description="ln m, f(p^a) = a ln p",
    )


def _log_p_sum() -> AdditiveFunction:
    return AdditiveFunction(
        name="log_p_sum",
        rule=lambda p, a: np.log(p.astype(np.float64)),
        strongly_additive=True,
        description="sum of ln p over p | m",
    )


def _log_m_diff() -> AdditiveFunction:
    return AdditiveFunction(
        name="log_m_diff",
        rule=lambda p, a: (a - 1) * np.log(p),
        strongly_additive=False,
        description="ln m - sum of ln p over p | m, f(p^a) = (a - 1) ln p",
    )


def _log_m_power_diff() -> AdditiveFunction:
    s = LOG_POWER_EXPONENT
    return AdditiveFunction(
        name="log_m_power_diff",
        rule=lambda p, a: s * (a - 1) * np.log(p),
        strongly_additive=False,
        description=f"ln m^{s} - sum of ln p^{s} over p | m",
    )


BUILTINS: Dict[str, Callable[[], AdditiveFunction]] = {
    "omega": _omega,
    "big_omega": _big_omega,
    "omega_diff": _omega_diff,
    "half_omega_diff": _half_omega_diff,
    "log_phi_ratio": _log_phi_ratio,
    "big_omega_minus_log_phi_ratio": _big_omega_minus_log_phi_ratio,
    "log_m": _log_m,
    "log_p_sum": _log_p_sum,
    "log_m_diff": _log_m_diff,
    "log_m_power_diff": _log_m_power_diff,
}


def builtin(name: str) -> AdditiveFunction:
    factory = BUILTINS.get(name)
    if factory is None:
        raise FunctionLookupError(
            f"unknown function {name!r}, expected one of: {', '.join(sorted(BUILTINS))}", field="fn"
        )
    return factory()


def builtin_names() -> List[str]:
    return sorted(BUILTINS)
