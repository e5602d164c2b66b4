import numpy as np
from scipy.special import ndtr


def normal_cdf(x: np.ndarray | float) -> np.ndarray | float:
    """Standard normal distribution function."""
    if np.ndim(x) == 0:
        return float(ndtr(x))
    return ndtr(np.asarray(x, dtype=np.float64))
