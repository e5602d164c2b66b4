"""Moment and cumulant recursions.

With m_0 = 1, raw moments and cumulants are related by
m_n = sum_{j=1..n} C(n-1, j-1) kappa_j m_{n-j}.
All functions work element-wise on arrays so many variables convert at once.
"""

from math import comb
from typing import List, Sequence

import numpy as np

MAX_CUMULANT_ORDER = 8


def cumulants_from_moments(moments: Sequence[np.ndarray | float]) -> List[np.ndarray]:
    """kappa_1..kappa_U from raw moments m_1..m_U."""
    m = [np.asarray(1.0)] + [np.asarray(x, dtype=np.float64) for x in moments]
    kappa: List[np.ndarray] = []
    for n in range(1, len(m)):
        value = m[n].copy()
        for j in range(1, n):
            value = value - comb(n - 1, j - 1) * kappa[j - 1] * m[n - j]
        kappa.append(value)
    return kappa


def moments_from_cumulants(cumulants: Sequence[np.ndarray | float]) -> List[np.ndarray]:
    """Raw moments m_1..m_U from kappa_1..kappa_U."""
    kappa = [np.asarray(x, dtype=np.float64) for x in cumulants]
    m: List[np.ndarray] = [np.asarray(1.0)]
    for n in range(1, len(kappa) + 1):
        value = np.zeros_like(kappa[0])
        for j in range(1, n + 1):
            value = value + comb(n - 1, j - 1) * kappa[j - 1] * m[n - j]
        m.append(value)
    return m[1:]


def central_from_cumulants(cumulants: Sequence[float]) -> List[float]:
    """Central moments mu_1..mu_U (mu_1 = 0): raw moments of the cumulants with kappa_1 zeroed."""
    shifted = [0.0] + [float(x) for x in cumulants[1:]]
    return [float(x) for x in moments_from_cumulants(shifted)]
