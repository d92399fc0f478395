"""
Symplectic phase-space linear algebra.

Quadratures are ordered (q₁…qₙ, p₁…pₙ) throughout and the vacuum has
variance 1/2, so Ω = [[0, I], [-I, 0]] and every bona fide covariance
matrix has symplectic eigenvalues ν ≥ 1/2.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union
import logging
import numpy as np
from scipy.linalg import qr, schur

from twoway.core.config import settings
from twoway.core.errors import (
    DomainError,
    InvalidCovarianceMatrixError,
    NotSymmetricError,
    SingularSpectrumError,
    UncertaintyViolationError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real symmetric 2n×2n matrix of quadrature second moments."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidCovarianceMatrixError(f"CM must be square, got shape {entries.shape}")
        if entries.shape[0] == 0 or entries.shape[0] % 2:
            raise InvalidCovarianceMatrixError(f"CM dimension must be even and positive, got {entries.shape[0]}")
        if not np.all(np.isfinite(entries)):
            raise InvalidCovarianceMatrixError("CM has non-finite entries")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim_modes(self) -> int:
        return self.entries.shape[0] // 2


@dataclass(frozen=True)
class SymplecticSpectrum:
    eigenvalues: np.ndarray  # descending

    @property
    def thermal_numbers(self) -> np.ndarray:
        return np.clip(self.eigenvalues - 0.5, 0.0, None)


@dataclass(frozen=True)
class GibbsMatrix:
    entries: np.ndarray
    singular_flags: List[bool] = field(default_factory=list)


CMLike = Union[CovarianceMatrix, np.ndarray]


def _as_array(V: CMLike) -> np.ndarray:
    if isinstance(V, CovarianceMatrix):
        return V.entries
    return CovarianceMatrix(V).entries


def symplectic_form(n: int) -> np.ndarray:
    """Ω for n modes in block ordering."""
    identity = np.eye(n)
    zeros = np.zeros((n, n))
    return np.block([[zeros, identity], [-identity, zeros]])


def symplectic_eigenvalues(V: CMLike) -> np.ndarray:
    """Moduli of the eigenvalues of iΩV, one per mode, sorted descending.

    No bona fide check is made, so this also serves partially transposed CMs.
    """
    V = _as_array(V)
    n = V.shape[0] // 2
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ V)))
    # eigenvalues come in ±ν pairs
    return moduli[::2][::-1].copy()


def validate_cm(V: CMLike) -> SymplecticSpectrum:
    """Check symmetry and the uncertainty principle; return the spectrum."""
    V = _as_array(V)
    scale = max(1.0, float(np.max(np.abs(V))))
    if np.max(np.abs(V - V.T)) > settings.symmetry_tol * scale:
        raise NotSymmetricError("Covariance matrix is not symmetric")
    nu = symplectic_eigenvalues(V)
    if nu[-1] < 0.5 - settings.bona_fide_tol:
        raise UncertaintyViolationError(
            f"Smallest symplectic eigenvalue {nu[-1]:.12g} violates the uncertainty principle"
        )
    return SymplecticSpectrum(eigenvalues=nu)


def singular_flags(spectrum: SymplecticSpectrum) -> List[bool]:
    """Per-mode purity flags: ν within eps_pure of 1/2."""
    return [bool(nu - 0.5 <= settings.eps_pure) for nu in spectrum.eigenvalues]


def is_singular(V: CMLike) -> bool:
    return any(singular_flags(validate_cm(V)))


def williamson(V: CMLike) -> Tuple[np.ndarray, np.ndarray]:
    """Williamson decomposition V = S·diag(ν, ν)·Sᵀ with S symplectic.

    Returns (ν, S) with ν ordered like the modes of the diagonal form.
    Uses the real Schur form of V^{-1/2} Ω V^{-1/2}, whose 2×2 blocks carry ±1/ν.
    """
    V = _as_array(V)
    n = V.shape[0] // 2
    w, U = np.linalg.eigh(V)
    if w.min() <= 0.0:
        raise UncertaintyViolationError("Williamson decomposition needs a positive-definite CM")
    sqrt_v = (U * np.sqrt(w)) @ U.T
    inv_sqrt_v = (U / np.sqrt(w)) @ U.T

    r = inv_sqrt_v @ symplectic_form(n) @ inv_sqrt_v
    r = 0.5 * (r - r.T)
    blocks, basis = schur(r, output="real")

    # Flip any block whose upper off-diagonal entry is negative
    swap = np.eye(2 * n)
    for i in range(n):
        if blocks[2 * i, 2 * i + 1] < 0:
            swap[2 * i:2 * i + 2, 2 * i:2 * i + 2] = [[0.0, 1.0], [1.0, 0.0]]
    basis = basis @ swap
    blocks = swap @ blocks @ swap
    a = np.array([blocks[2 * i, 2 * i + 1] for i in range(n)])

    # Interleaved (q₁,p₁,q₂,p₂,…) → block ordering
    interleave = np.zeros((2 * n, 2 * n))
    for i in range(n):
        interleave[2 * i, i] = 1.0
        interleave[2 * i + 1, i + n] = 1.0

    S = sqrt_v @ (basis @ interleave) * np.sqrt(np.concatenate([a, a]))
    return 1.0 / a, S


def symplectic_inverse(S: np.ndarray) -> np.ndarray:
    """S⁻¹ = −Ω Sᵀ Ω for symplectic S."""
    omega = symplectic_form(S.shape[0] // 2)
    return -omega @ S.T @ omega


def gibbs_matrix(V: CMLike) -> GibbsMatrix:
    """G = 2iΩ coth⁻¹(2ViΩ) via the eigendecomposition of 2ViΩ."""
    V = _as_array(V)
    spectrum = validate_cm(V)
    flags = singular_flags(spectrum)
    if any(flags):
        raise SingularSpectrumError(
            f"Gibbs matrix diverges: symplectic spectrum {spectrum.eigenvalues} has a pure direction"
        )
    omega = symplectic_form(V.shape[0] // 2)
    w, P = np.linalg.eig(2.0 * V @ (1j * omega))
    # eigenvalues are ±2ν, real and of modulus > 1
    f = np.arctanh(1.0 / w.real)
    F = P @ np.diag(f) @ np.linalg.inv(P)
    G = np.real(2j * omega @ F)
    return GibbsMatrix(entries=0.5 * (G + G.T), singular_flags=flags)


def cm_from_gibbs(G: Union[GibbsMatrix, np.ndarray]) -> CovarianceMatrix:
    """Inverse of gibbs_matrix: V = ½ coth(iΩG/2) iΩ."""
    G = G.entries if isinstance(G, GibbsMatrix) else np.asarray(G, dtype=float)
    omega = symplectic_form(G.shape[0] // 2)
    w, P = np.linalg.eig(0.5j * omega @ G)
    w = w.real
    if np.any(np.abs(w) < 1e-300):
        raise DomainError("Gibbs matrix is not invertible (infinite-temperature mode)")
    F = P @ np.diag(1.0 / np.tanh(w)) @ np.linalg.inv(P)
    V = np.real(0.5 * F @ (1j * omega))
    return CovarianceMatrix(0.5 * (V + V.T))


def _haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def _passive(u: np.ndarray) -> np.ndarray:
    return np.block([[u.real, -u.imag], [u.imag, u.real]])


def random_symplectic(n: int, seed: Optional[int] = None, max_squeezing: float = 0.5) -> np.ndarray:
    """Random S = O₁·Sq·O₂ built from two Haar rotations and single-mode squeezers.

    `seed=None` takes the identity path and returns I₂ₙ.
    """
    if n < 1:
        raise DomainError(f"Number of modes must be positive, got {n}")
    if seed is None:
        return np.eye(2 * n)
    rng = np.random.default_rng(seed)
    outer = _passive(_haar_unitary(n, rng))
    inner = _passive(_haar_unitary(n, rng))
    r = rng.uniform(-max_squeezing, max_squeezing, size=n)
    squeezer = np.diag(np.concatenate([np.exp(-r), np.exp(r)]))
    return outer @ squeezer @ inner


def random_cm(n: int, seed: int, nu_range: Tuple[float, float] = (0.6, 2.5),
              max_squeezing: float = 0.5) -> CovarianceMatrix:
    """Random bona fide CM S·diag(ν,ν)·Sᵀ with ν drawn uniformly from nu_range."""
    rng = np.random.default_rng(seed)
    nu = rng.uniform(*nu_range, size=n)
    S = random_symplectic(n, seed=int(rng.integers(0, 2**31 - 1)), max_squeezing=max_squeezing)
    V = S @ np.diag(np.concatenate([nu, nu])) @ S.T
    return CovarianceMatrix(0.5 * (V + V.T))


def vacuum_cm(n: int = 1) -> CovarianceMatrix:
    return CovarianceMatrix(0.5 * np.eye(2 * n))


def thermal_cm(nbar: float) -> CovarianceMatrix:
    return CovarianceMatrix((nbar + 0.5) * np.eye(2))


def tmsv_cm(mu: float) -> CovarianceMatrix:
    """Two-mode squeezed vacuum with local variance μ = n̄ + 1/2, ordering (q_A, q_B, p_A, p_B)."""
    c = np.sqrt(max(mu * mu - 0.25, 0.0))
    return two_mode_cm(mu, mu, c)


def two_mode_cm(a: float, b: float, c: float) -> CovarianceMatrix:
    """Standard-form CM [[a, c], [c, b]] ⊕ [[a, −c], [−c, b]]."""
    return CovarianceMatrix(
        np.array(
            [
                [a, c, 0.0, 0.0],
                [c, b, 0.0, 0.0],
                [0.0, 0.0, a, -c],
                [0.0, 0.0, -c, b],
            ]
        )
    )


def partial_transpose_cm(V: CMLike) -> np.ndarray:
    """Partial transposition of the last mode: p_n → −p_n."""
    V = _as_array(V)
    flip = np.ones(V.shape[0])
    flip[-1] = -1.0
    return V * np.outer(flip, flip)
