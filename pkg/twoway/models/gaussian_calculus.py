"""
Entropy and relative entropy of multimode Gaussian states.

The relative entropy is S(ρ₁‖ρ₂) = −Σ(V₁,V₁,0) + Σ(V₁,V₂,δ) with δ = u₁ − u₂ and

    Σ(V₁,V₂,δ) = [ln det(V₂ + iΩ/2) + Tr(V₁G₂) + δᵀG₂δ] / (2 ln 2).

When V₂ has pure directions the Gibbs matrix G₂ diverges. Σ is then
evaluated term by term in the Williamson basis of V₂, where each pure
mode contributes either zero or +∞.
"""
from dataclasses import dataclass
from typing import Optional, Union
import logging
import math
import numpy as np

from twoway.core.config import settings
from twoway.core.errors import InvalidCovarianceMatrixError
from twoway.models.symplectic import (
    CMLike,
    CovarianceMatrix,
    gibbs_matrix,
    singular_flags,
    symplectic_form,
    symplectic_inverse,
    validate_cm,
    williamson,
)
from twoway.utils.constants import LN2

logger = logging.getLogger(__name__)

Bits = float  # extended real: may be math.inf


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cm: CovarianceMatrix

    def __post_init__(self):
        cm = self.cm if isinstance(self.cm, CovarianceMatrix) else CovarianceMatrix(self.cm)
        mean = np.zeros(cm.entries.shape[0]) if self.mean is None else np.array(self.mean, dtype=float)
        if mean.shape != (cm.entries.shape[0],):
            raise InvalidCovarianceMatrixError(
                f"Mean vector of length {mean.size} does not match a {cm.dim_modes}-mode CM"
            )
        validate_cm(cm)
        object.__setattr__(self, "cm", cm)
        object.__setattr__(self, "mean", mean)

    @classmethod
    def centered(cls, cm: CMLike) -> "GaussianState":
        return cls(mean=None, cm=cm)

    def displaced(self, shift: np.ndarray) -> "GaussianState":
        return GaussianState(mean=self.mean + np.asarray(shift, dtype=float), cm=self.cm)


def h_entropy(nbar: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """h(x) = (x+1)log₂(x+1) − x log₂x, the entropy of a thermal state with mean x photons."""
    x = np.clip(np.asarray(nbar, dtype=float), 0.0, None)
    # log₂(x+1) + x log₂(1 + 1/x) keeps full precision at large x
    safe = np.where(x > 0.0, x, 1.0)
    tail = np.where(x > 0.0, x * np.log1p(1.0 / safe), 0.0)
    value = (np.log1p(x) + tail) / LN2
    return float(value) if value.ndim == 0 else value


def s_entropy(nu: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Entropy of a thermal mode in terms of its symplectic eigenvalue, s(ν) = h(ν − 1/2)."""
    return h_entropy(np.asarray(nu, dtype=float) - 0.5)


def von_neumann_entropy(s: Union[GaussianState, CMLike]) -> Bits:
    cm = s.cm if isinstance(s, GaussianState) else s
    spectrum = validate_cm(cm)
    return float(np.sum(h_entropy(spectrum.thermal_numbers)))


def _singular_sum(V1: np.ndarray, V2: np.ndarray, delta: np.ndarray) -> Bits:
    """Σ evaluated mode by mode in the Williamson basis of V₂."""
    nu2, S = williamson(V2)
    n = nu2.size
    S_inv = symplectic_inverse(S)
    V1_local = S_inv @ V1 @ S_inv.T
    delta_local = S_inv @ delta

    total = 0.0
    for k in range(n):
        t = (
            V1_local[k, k]
            + V1_local[k + n, k + n]
            + delta_local[k] ** 2
            + delta_local[k + n] ** 2
        )
        nu = nu2[k]
        if nu - 0.5 <= settings.eps_pure:
            if abs(1.0 - t) > settings.singular_term_tol:
                logger.debug(f"Pure mode {k} of the reference meets weight {t:.3e}: Σ diverges")
                return math.inf
            # log₂(ν + 1/2) = 0 at ν = 1/2
            continue
        total += 0.5 * ((1.0 + t) * math.log2(nu + 0.5) + (1.0 - t) * math.log2(nu - 0.5))
    return total


def sigma_functional(V1: CMLike, V2: CMLike, delta: Optional[np.ndarray] = None) -> Bits:
    """Σ(V₁,V₂,δ) = −Tr(ρ₁ log₂ ρ₂) in bits; +∞ when ρ₁ leaks out of a pure direction of ρ₂."""
    V1 = V1.entries if isinstance(V1, CovarianceMatrix) else CovarianceMatrix(V1).entries
    V2 = V2.entries if isinstance(V2, CovarianceMatrix) else CovarianceMatrix(V2).entries
    if V1.shape != V2.shape:
        raise InvalidCovarianceMatrixError(f"CM shapes differ: {V1.shape} vs {V2.shape}")
    delta = np.zeros(V1.shape[0]) if delta is None else np.asarray(delta, dtype=float)

    spectrum = validate_cm(V2)
    if any(singular_flags(spectrum)):
        return _singular_sum(V1, V2, delta)

    G = gibbs_matrix(V2).entries
    omega = symplectic_form(V2.shape[0] // 2)
    _, log_det = np.linalg.slogdet(V2 + 0.5j * omega)
    value = (float(np.real(log_det)) + float(np.trace(V1 @ G)) + float(delta @ G @ delta)) / (2.0 * LN2)
    return value


def relative_entropy(s1: GaussianState, s2: GaussianState) -> Bits:
    """S(ρ₁‖ρ₂) in bits, as an extended real."""
    validate_cm(s1.cm)
    delta = s1.mean - s2.mean
    cross = sigma_functional(s1.cm, s2.cm, delta)
    if math.isinf(cross):
        return math.inf
    value = cross - von_neumann_entropy(s1)
    if value < 0.0:
        if value < -settings.nonnegativity_tol:
            logger.warning(f"Relative entropy evaluated to {value:.3e} < 0")
        else:
            value = 0.0
    return value
