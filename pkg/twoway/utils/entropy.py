"""Classical entropies in bits."""
from typing import Sequence, Union
import numpy as np
from scipy.special import xlogy

from twoway.utils.constants import LN2

ArrayLike = Union[float, Sequence[float], np.ndarray]


def binary_entropy(x: ArrayLike) -> Union[float, np.ndarray]:
    """H₂(x) = −x log₂x − (1−x) log₂(1−x), with H₂(0) = H₂(1) = 0."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    value = -(xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)) / LN2
    return float(value) if value.ndim == 0 else value


def shannon_entropy(probs: ArrayLike) -> float:
    """H(p) = −Σ p log₂p over a probability vector."""
    p = np.clip(np.asarray(probs, dtype=float).ravel(), 0.0, None)
    return float(-np.sum(xlogy(p, p)) / LN2)
