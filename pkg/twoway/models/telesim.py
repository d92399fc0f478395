"""
Finite-dimensional teleportation simulator.

Implements generalized Pauli operators, the Bell POVM, teleportation over an
arbitrary bipartite resource with arbitrary correction unitaries, Choi
roundtrips and the tele-covariance test. Bipartite matrices are ordered
input ⊗ output, and Φ is the maximally entangled state d^{-1/2} Σ|ii⟩.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
import logging
import math
import numpy as np
from scipy.linalg import block_diag, null_space, polar
from scipy.special import xlogy

from twoway.core.config import settings
from twoway.core.errors import (
    DimensionMismatchError,
    DimensionTooLargeError,
    IndexOutOfRangeError,
    InvalidChannelError,
    InvalidStateError,
    NotCovariantError,
)
from twoway.schemas.report import StretchReport
from twoway.utils.constants import LN2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, PSD matrix. `dims` records a bipartite split (d_A, d_B)."""

    entries: np.ndarray
    dims: Tuple[int, ...] = ()

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidStateError(f"Density matrix must be square, got {rho.shape}")
        dims = tuple(self.dims) or (rho.shape[0],)
        if int(np.prod(dims)) != rho.shape[0]:
            raise DimensionMismatchError(f"dims {dims} do not match matrix size {rho.shape[0]}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise InvalidStateError("Density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-12:
            raise InvalidStateError(f"Density matrix has trace {np.trace(rho).real:.15g}")
        if np.linalg.eigvalsh(rho).min() < -settings.nonnegativity_tol:
            raise InvalidStateError("Density matrix is not positive semidefinite")
        object.__setattr__(self, "entries", rho)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


@dataclass(frozen=True)
class QuditChannel:
    """CPTP map given by Kraus operators of shape (dim_out, dim_in)."""

    dim_in: int
    dim_out: int
    kraus: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        ops = [np.asarray(k, dtype=complex) for k in self.kraus]
        if not ops:
            raise InvalidChannelError("A channel needs at least one Kraus operator")
        for op in ops:
            if op.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatchError(
                    f"Kraus operator of shape {op.shape}, expected {(self.dim_out, self.dim_in)}"
                )
        completeness = sum(op.conj().T @ op for op in ops)
        if np.max(np.abs(completeness - np.eye(self.dim_in))) > settings.kraus_tol:
            raise InvalidChannelError("Kraus operators are not trace preserving")
        object.__setattr__(self, "kraus", ops)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
        return sum(k @ rho @ k.conj().T for k in self.kraus)

    def then(self, other: "QuditChannel") -> "QuditChannel":
        """Composition `other ∘ self`."""
        if other.dim_in != self.dim_out:
            raise DimensionMismatchError("Cannot compose channels with mismatched dimensions")
        return QuditChannel(self.dim_in, other.dim_out, [b @ a for a in self.kraus for b in other.kraus])


# ---- Pauli operators and Bell basis ---------------------------------------

def generalized_pauli(d: int, a: int, b: int) -> np.ndarray:
    """U_ab = X^a Z^b with X|j⟩ = |j⊕1⟩ and Z|j⟩ = ω^j|j⟩."""
    if not (0 <= a < d and 0 <= b < d):
        raise IndexOutOfRangeError(f"Pauli indices ({a}, {b}) out of range for d={d}")
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)


def pauli_index(d: int, k: int) -> Tuple[int, int]:
    return divmod(k, d)


def maximally_entangled(d: int) -> np.ndarray:
    phi = np.eye(d).reshape(d * d) / math.sqrt(d)
    return np.outer(phi, phi).astype(complex)


def bell_state(d: int, a: int, b: int) -> np.ndarray:
    """|Φ_ab⟩ = (I ⊗ U_ab)|Φ⟩."""
    phi = np.eye(d).reshape(d * d) / math.sqrt(d)
    return np.kron(np.eye(d), generalized_pauli(d, a, b)) @ phi


def bell_povm(d: int) -> List[np.ndarray]:
    """M_k = (U_k ⊗ I)† Φ (U_k ⊗ I) for k = a·d + b."""
    phi = maximally_entangled(d)
    povm = []
    for k in range(d * d):
        u = np.kron(generalized_pauli(d, *pauli_index(d, k)), np.eye(d))
        povm.append(u.conj().T @ phi @ u)
    return povm


def pauli_channel(d: int, probs: Sequence[float]) -> QuditChannel:
    probs = np.asarray(probs, dtype=float)
    if probs.size != d * d:
        raise DimensionMismatchError(f"Pauli channel needs {d * d} probabilities")
    kraus = [
        math.sqrt(p) * generalized_pauli(d, *pauli_index(d, k))
        for k, p in enumerate(probs)
        if p > 0.0
    ]
    return QuditChannel(d, d, kraus)


def identity_channel(d: int) -> QuditChannel:
    return QuditChannel(d, d, [np.eye(d)])


# ---- Choi roundtrips -------------------------------------------------------

def _choi_matrix(kraus: Sequence[np.ndarray], dim_in: int) -> np.ndarray:
    phi = np.eye(dim_in).reshape(dim_in * dim_in) / math.sqrt(dim_in)
    vectors = [np.kron(np.eye(dim_in), k) @ phi for k in kraus]
    return sum(np.outer(v, v.conj()) for v in vectors)


def choi_of(ch: QuditChannel) -> DensityMatrix:
    """(I ⊗ E)(Φ) on the input ⊗ output space."""
    choi = _choi_matrix(ch.kraus, ch.dim_in)
    return DensityMatrix(0.5 * (choi + choi.conj().T), dims=(ch.dim_in, ch.dim_out))


def channel_from_choi(choi: np.ndarray, dim_in: int, dim_out: int, tol: float = 1e-13) -> QuditChannel:
    """Kraus operators from the eigendecomposition of d·ρ_E."""
    choi = np.asarray(choi.entries if isinstance(choi, DensityMatrix) else choi, dtype=complex)
    eigvals, vecs = np.linalg.eigh(dim_in * choi)
    kraus = [
        math.sqrt(lam) * vec.reshape(dim_in, dim_out).T
        for lam, vec in zip(eigvals, vecs.T)
        if lam > tol
    ]
    return QuditChannel(dim_in, dim_out, kraus)


def choi_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Trace distance ½‖a − b‖₁."""
    diff = a.entries - b.entries
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))


# ---- Teleportation ---------------------------------------------------------

def resource_weights(sigma: DensityMatrix) -> np.ndarray:
    """Tr(σ M_k) for each Bell outcome k; a probability vector."""
    d = sigma.dims[0]
    if sigma.dims != (d, d):
        raise DimensionMismatchError(f"Bell weights need a d×d resource, got dims {sigma.dims}")
    return np.array([np.trace(sigma.entries @ m).real for m in bell_povm(d)])


def bell_diagonal_weights(sigma: DensityMatrix) -> np.ndarray:
    """⟨Φ_ab|σ|Φ_ab⟩, flattened as a·d + b."""
    d = sigma.dims[0]
    if sigma.dims != (d, d):
        raise DimensionMismatchError(f"Bell weights need a d×d resource, got dims {sigma.dims}")
    weights = []
    for k in range(d * d):
        v = bell_state(d, *pauli_index(d, k))
        weights.append(float(np.real(v.conj() @ sigma.entries @ v)))
    return np.array(weights)


def teleport_channel(sigma: DensityMatrix, corrections: Optional[Sequence[np.ndarray]] = None) -> QuditChannel:
    """Teleportation over resource σ (dims d × d_out) with Bell detection and corrections C_k.

    Outcome k leaves Bob with Tr_aA[(M_k ⊗ I)(ρ ⊗ σ)], on which C_k acts.
    The default C_k = U_k† is standard teleportation.
    """
    if len(sigma.dims) != 2:
        raise DimensionMismatchError("Resource state must be bipartite")
    d, d_out = sigma.dims
    if corrections is None:
        if d_out != d:
            raise DimensionMismatchError("Default corrections need a d×d resource")
        corrections = [generalized_pauli(d, *pauli_index(d, k)).conj().T for k in range(d * d)]
    corrections = [np.asarray(c, dtype=complex) for c in corrections]
    if len(corrections) != d * d or any(c.shape != (d_out, d_out) for c in corrections):
        raise DimensionMismatchError(f"Expected {d * d} correction unitaries of size {d_out}")

    resource = sigma.entries.reshape(d, d_out, d, d_out)
    povm = [m.reshape(d, d, d, d) for m in bell_povm(d)]

    def bob(x: np.ndarray) -> np.ndarray:
        out = np.zeros((d_out, d_out), dtype=complex)
        for m, c in zip(povm, corrections):
            branch = np.einsum("xyzw,zx,wbyc->bc", m, x, resource)
            out += c @ branch @ c.conj().T
        return out

    choi = np.zeros((d * d_out, d * d_out), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            choi += np.kron(unit, bob(unit)) / d
    return channel_from_choi(0.5 * (choi + choi.conj().T), d, d_out)


# ---- Covariance ------------------------------------------------------------

def is_weyl_covariant(ch: QuditChannel, tol: Optional[float] = None) -> bool:
    """[ρ_E, U_k* ⊗ U_k] = 0 for every generalized Pauli U_k."""
    tol = settings.covariance_tol if tol is None else tol
    if ch.dim_in != ch.dim_out:
        return False
    d = ch.dim_in
    rho = choi_of(ch).entries
    for k in range(d * d):
        u = generalized_pauli(d, *pauli_index(d, k))
        w = np.kron(u.conj(), u)
        if np.max(np.abs(rho @ w - w @ rho)) > tol:
            return False
    return True


def _correction_candidate(rho: np.ndarray, rho_k: np.ndarray, reference: np.ndarray,
                          d_in: int, d_out: int) -> List[np.ndarray]:
    """Unitaries V solving ρ_k (I⊗V) = (I⊗V) ρ_E, obtained by polar decomposition."""
    identity = np.eye(d_in)
    columns = []
    for p in range(d_out):
        for q in range(d_out):
            unit = np.zeros((d_out, d_out), dtype=complex)
            unit[p, q] = 1.0
            lifted = np.kron(identity, unit)
            columns.append((rho_k @ lifted - lifted @ rho).ravel())
    kernel = null_space(np.array(columns).T, rcond=1e-10)
    if kernel.shape[1] == 0:
        return []
    overlap = kernel @ (kernel.conj().T @ reference.ravel())
    candidates = []
    if np.linalg.norm(overlap) > 1e-8:
        candidates.append(overlap.reshape(d_out, d_out))
    candidates.extend(kernel[:, j].reshape(d_out, d_out) for j in range(kernel.shape[1]))
    return [polar(c)[0] for c in candidates]


def recover_corrections(ch: QuditChannel, tol: Optional[float] = None) -> Optional[List[np.ndarray]]:
    """For each U_k, a unitary V_k with E(U_k ρ U_k†) = V_k E(ρ) V_k†, or None if one is missing."""
    tol = settings.covariance_tol if tol is None else tol
    if ch.dim_in > settings.max_telesim_dim:
        raise DimensionTooLargeError(
            f"Covariance search supports dim_in ≤ {settings.max_telesim_dim}, got {ch.dim_in}"
        )
    d, d_out = ch.dim_in, ch.dim_out
    rho = choi_of(ch).entries
    found = []
    for k in range(d * d):
        u = generalized_pauli(d, *pauli_index(d, k))
        rho_k = _choi_matrix([op @ u for op in ch.kraus], d)
        reference = u if d_out == d else block_diag(u, np.eye(d_out - d))
        match = None
        for v in _correction_candidate(rho, rho_k, reference, d, d_out):
            lifted = np.kron(np.eye(d), v)
            if np.max(np.abs(lifted @ rho @ lifted.conj().T - rho_k)) <= tol:
                match = v
                break
        if match is None:
            logger.debug(f"No correction unitary for teleportation outcome {k}")
            return None
        found.append(match)
    return found


def is_tele_covariant(ch: QuditChannel) -> bool:
    return recover_corrections(ch) is not None


def stretch_check(ch: QuditChannel) -> StretchReport:
    """Teleport over the channel's own Choi matrix and compare with the channel."""
    corrections = recover_corrections(ch)
    if corrections is None:
        raise NotCovariantError("Channel is not teleportation-covariant")
    target = choi_of(ch)
    simulated = teleport_channel(target, [v.conj().T for v in corrections])
    distance = choi_distance(choi_of(simulated), target)
    passed = distance < 1e-10
    if not passed:
        logger.warning(f"Choi roundtrip distance {distance:.3e} exceeds 1e-10")
    return StretchReport(covariant=True, distance=distance, passed=passed,
                         dim_in=ch.dim_in, dim_out=ch.dim_out)


# ---- Entropies -------------------------------------------------------------

def entropy(rho: DensityMatrix) -> float:
    lam = np.clip(rho.eigenvalues(), 0.0, None)
    return float(-np.sum(xlogy(lam, lam)) / LN2)


def quantum_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix, tol: float = 1e-12) -> float:
    """S(ρ‖σ) in bits; +∞ when ρ has weight outside the support of σ."""
    if rho.dim != sigma.dim:
        raise DimensionMismatchError("States act on different spaces")
    lam, basis = np.linalg.eigh(sigma.entries)
    weights = np.real(np.einsum("ij,jk,ki->i", basis.conj().T, rho.entries, basis))
    kernel = lam <= tol
    if np.any(weights[kernel] > 1e-10):
        return math.inf
    support = ~kernel
    cross = -float(np.sum(weights[support] * np.log2(lam[support])))
    return max(cross - entropy(rho), 0.0)
