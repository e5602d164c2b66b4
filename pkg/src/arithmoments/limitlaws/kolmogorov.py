import math
from typing import Dict

import numpy as np
from pydantic import ValidationError

from arithmoments.errors import ParameterError
from arithmoments.models.domain import KolmogorovParams, kolmogorov_param_violations

PARAM_KEYS = ("A", "C", "mu", "nu")


def parse_params(text: str) -> KolmogorovParams:
    """Parse "A=-1,C=1,mu=0.3,nu=0.3" into validated params."""
    values: Dict[str, float] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in PARAM_KEYS:
            raise ParameterError(f"expected KEY=VALUE with KEY in {', '.join(PARAM_KEYS)}, got {item!r}", field="params")
        if key in values:
            raise ParameterError(f"parameter {key} given twice", field="params")
        try:
            values[key] = float(raw)
        except ValueError as e:
            raise ParameterError(f"parameter {key}={raw!r} is not a number", field="params") from e

    missing = [key for key in PARAM_KEYS if key not in values]
    if missing:
        raise ParameterError(f"missing parameter(s): {', '.join(missing)}", field="params")
    return make_params(**values)


def make_params(A: float, C: float, mu: float, nu: float) -> KolmogorovParams:
    problems = kolmogorov_param_violations(A, C, mu, nu)
    if problems:
        raise ParameterError("; ".join(problems), field="params")
    try:
        return KolmogorovParams(A=A, C=C, mu=mu, nu=nu)
    except ValidationError as e:
        raise ParameterError(str(e), field="params") from e


class KolmogorovFunction:
    """K(u): 0 below A, mu(1 - u^2/A^2) on [A, 0), nu u^2/C^2 + 1 - nu on [0, C], 1 above C.

    Right-continuous at 0, so K(0) = 1 - nu and the atom at 0 has mass 1 - mu - nu.
    """

    def __init__(self, params: KolmogorovParams):
        problems = kolmogorov_param_violations(params.A, params.C, params.mu, params.nu)
        if problems:
            raise ParameterError("; ".join(problems), field="params")
        self.params = params

    def __call__(self, u: np.ndarray | float) -> np.ndarray:
        u = np.asarray(u, dtype=np.float64)
        A, C, mu, nu = self.params.A, self.params.C, self.params.mu, self.params.nu

        left = mu * (1.0 - u * u / (A * A)) if A < 0 else np.zeros_like(u)
        right = nu * u * u / (C * C) + 1.0 - nu if C > 0 else np.ones_like(u)
        return np.select(
            [u < A, u < 0, u <= C],
            [np.zeros_like(u), left, right],
            np.ones_like(u),
        )


def k_eval(kf: KolmogorovFunction, u: float) -> float:
    if math.isnan(u):
        raise ParameterError("u must not be NaN", field="u")
    return float(kf(u))
