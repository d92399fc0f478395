"""Independent Fock-basis reference values for single-mode Gaussian states."""
import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

CUTOFF = 200


def thermal_log_populations(nbar: float, cutoff: int = CUTOFF) -> np.ndarray:
    """ln p_k for p_k = n̄^k / (n̄+1)^(k+1)."""
    k = np.arange(cutoff + 1)
    return k * np.log(nbar / (nbar + 1.0)) - np.log(nbar + 1.0)


def coherent_populations(alpha: complex, cutoff: int = CUTOFF) -> np.ndarray:
    """|⟨k|α⟩|² = e^{−|α|²} |α|^{2k} / k!."""
    k = np.arange(cutoff + 1)
    r2 = abs(alpha) ** 2
    if r2 == 0.0:
        pops = np.zeros(cutoff + 1)
        pops[0] = 1.0
        return pops
    return np.exp(-r2 + k * np.log(r2) - gammaln(k + 1))


def pure_to_thermal_relative_entropy(populations: np.ndarray, nbar: float) -> float:
    """S(|ψ⟩⟨ψ| ‖ τ_n̄) = −Σ_k |ψ_k|² log₂ p_k for a thermal (diagonal) reference."""
    return float(-np.sum(populations * thermal_log_populations(nbar, populations.size - 1)) / np.log(2.0))


def thermal_to_thermal_relative_entropy(nbar1: float, nbar2: float, cutoff: int = CUTOFF) -> float:
    log_p = thermal_log_populations(nbar1, cutoff)
    log_q = thermal_log_populations(nbar2, cutoff)
    return float(np.sum(np.exp(log_p) * (log_p - log_q)) / np.log(2.0))


def _ladder(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1)), k=1).astype(complex)


def gaussian_unitary(r: float, alpha: complex, cutoff: int = CUTOFF) -> np.ndarray:
    """D(α)·S(r) in a truncated Fock space, with S(r) = exp[r(a² − a†²)/2]."""
    a = _ladder(cutoff)
    ad = a.conj().T
    squeeze = expm(0.5 * r * (a @ a - ad @ ad))
    displace = expm(alpha * ad - np.conj(alpha) * a)
    return displace @ squeeze


def squeezed_thermal_moments(nbar: float, r: float, alpha: complex):
    """Mean and CM of D(α)S(r)τ_n̄S(r)†D(α)† in (q, p) ordering with vacuum variance 1/2."""
    nu = nbar + 0.5
    mean = np.sqrt(2.0) * np.array([alpha.real, alpha.imag])
    cm = np.diag([nu * np.exp(-2.0 * r), nu * np.exp(2.0 * r)])
    return mean, cm


def gaussian_relative_entropy(state1, state2, cutoff: int = CUTOFF) -> float:
    """S(ρ₁‖ρ₂) for states given as (n̄, r, α) = D(α)S(r)τ_n̄S(r)†D(α)†.

    With ρᵢ = Uᵢτᵢ Uᵢ†, −Tr ρ₁ ln ρ₂ = −Σ_k ⟨k|W τ₁ W†|k⟩ ln p_k(n̄₂) where W = U₂†U₁,
    and S(ρ₁) is the thermal entropy of τ₁.
    """
    nbar1, r1, alpha1 = state1
    nbar2, r2, alpha2 = state2
    big = 2 * cutoff
    w = gaussian_unitary(r2, alpha2, big).conj().T @ gaussian_unitary(r1, alpha1, big)
    pops1 = np.exp(thermal_log_populations(nbar1, big))
    rotated = np.real(np.einsum("ij,j,ij->i", w, pops1, w.conj()))
    cross = -np.sum(rotated[: cutoff + 1] * thermal_log_populations(nbar2, cutoff))
    entropy1 = -np.sum(pops1 * thermal_log_populations(nbar1, big))
    return float((cross - entropy1) / np.log(2.0))
