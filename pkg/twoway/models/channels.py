"""
Channel constructions: Gaussian quasi-Choi covariance matrices, exact
discrete-variable Choi matrices and Kraus forms, entanglement-breaking
predicates and the closest-separable references used by the flux bounds.
"""
from dataclasses import dataclass
from typing import List, Union
import logging
import math
import numpy as np

from twoway.core.errors import NotDVFamilyError, NotGaussianFamilyError, OutOfRangeError, UnsupportedChannelError
from twoway.models.symplectic import CovarianceMatrix, two_mode_cm, validate_cm
from twoway.models.telesim import (
    DensityMatrix,
    QuditChannel,
    bell_state,
    choi_of,
    generalized_pauli,
    is_tele_covariant,
    maximally_entangled,
    pauli_channel,
    stretch_check,
)
from twoway.schemas.channel import (
    AdditiveNoise,
    Amplifier,
    AmplitudeDamping,
    ChannelSpec,
    ConjugateAmplifier,
    Dephasing,
    Depolarizing,
    Erasure,
    FormA2,
    FormB1,
    PauliQudit,
    ThermalLoss,
)
from twoway.schemas.report import StretchReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuasiChoiCM:
    """Output of a TMSV(μ) input, one arm sent through the channel.

    Standard form [[μ, γ], [γ, β]] ⊕ [[μ, −γ], [−γ, β]] in (q_A, q_B, p_A, p_B) ordering.
    """

    mu: float
    beta: float
    gamma: float
    cm: CovarianceMatrix


@dataclass(frozen=True)
class ClosestSeparable:
    cm: CovarianceMatrix
    already_separable: bool


# ---- Gaussian --------------------------------------------------------------

def _gain_and_noise(c: ChannelSpec):
    """(η, n̄, ξ) of the canonical form; gain g plays the role of η > 1."""
    if isinstance(c, ThermalLoss):
        return c.eta, c.nbar, 0.0
    if isinstance(c, Amplifier):
        return c.g, c.nbar, 0.0
    if isinstance(c, AdditiveNoise):
        return 1.0, 0.0, c.xi
    if isinstance(c, (ConjugateAmplifier, FormA2, FormB1)):
        raise UnsupportedChannelError(f"{c.family} has no quasi-Choi construction")
    raise NotGaussianFamilyError(f"{c.family} is not a Gaussian channel")


def gaussian_choi_cm(c: ChannelSpec, mu: float) -> QuasiChoiCM:
    """β = ημ + |1−η|(n̄+½) + ξ and γ = √(η(μ²−¼))."""
    eta, nbar, xi = _gain_and_noise(c)
    if mu < 0.5:
        raise OutOfRangeError(f"TMSV parameter μ must be at least 1/2, got {mu}")
    beta = eta * mu + abs(1.0 - eta) * (nbar + 0.5) + xi
    gamma = math.sqrt(eta * (mu * mu - 0.25))
    cm = two_mode_cm(mu, beta, gamma)
    validate_cm(cm)
    return QuasiChoiCM(mu=mu, beta=beta, gamma=gamma, cm=cm)


def separability_gap(q: QuasiChoiCM) -> float:
    """√((μ−½)(β−½)) − γ; nonnegative iff the quasi-Choi state is separable."""
    return math.sqrt(max((q.mu - 0.5) * (q.beta - 0.5), 0.0)) - q.gamma


def closest_separable_cm(q: QuasiChoiCM) -> ClosestSeparable:
    """Keep the local variances and lower the correlation to the separability boundary."""
    if separability_gap(q) >= 0.0:
        logger.debug("Quasi-Choi state is already separable")
        return ClosestSeparable(cm=q.cm, already_separable=True)
    c = math.sqrt((q.mu - 0.5) * (q.beta - 0.5))
    return ClosestSeparable(cm=two_mode_cm(q.mu, q.beta, c), already_separable=False)


def is_entanglement_breaking(c: ChannelSpec) -> bool:
    """Threshold tests, boundary inclusive. DV families report False."""
    if isinstance(c, ThermalLoss):
        if c.eta >= 1.0:
            return False
        return c.nbar >= c.eta / (1.0 - c.eta)
    if isinstance(c, Amplifier):
        return c.nbar >= 1.0 / (c.g - 1.0)
    if isinstance(c, AdditiveNoise):
        return c.xi >= 1.0
    if isinstance(c, (ConjugateAmplifier, FormA2)):
        return True
    return False


# ---- Discrete variable -----------------------------------------------------

def pauli_probabilities(c: ChannelSpec) -> np.ndarray:
    """Pauli weights p_ab (index a·d + b) of a Pauli, depolarizing or dephasing channel."""
    if isinstance(c, PauliQudit):
        return np.asarray(c.probs, dtype=float)
    if isinstance(c, Depolarizing):
        probs = np.full(c.d * c.d, c.p / (c.d * c.d))
        probs[0] = 1.0 - c.p + c.p / (c.d * c.d)
        return probs
    if isinstance(c, Dephasing):
        probs = np.zeros(c.d * c.d)
        probs[:c.d] = c.probs  # a = 0: pure phase flips Z^b
        return probs
    raise UnsupportedChannelError(f"{c.family} is not a Pauli channel")


def _erasure_kraus(d: int, p: float) -> List[np.ndarray]:
    keep = np.zeros((d + 1, d))
    keep[:d, :d] = np.eye(d)
    ops = [math.sqrt(1.0 - p) * keep]
    for i in range(d):
        flag = np.zeros((d + 1, d))
        flag[d, i] = 1.0
        ops.append(math.sqrt(p) * flag)
    return ops


def _damping_kraus(p: float) -> List[np.ndarray]:
    a0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - p)]])
    a1 = np.array([[0.0, math.sqrt(p)], [0.0, 0.0]])
    return [a0, a1]


def channel_kraus(c: ChannelSpec) -> QuditChannel:
    """Kraus representation of a DV family."""
    if isinstance(c, (PauliQudit, Depolarizing)):
        return pauli_channel(c.d, pauli_probabilities(c))
    if isinstance(c, Dephasing):
        kraus = [
            math.sqrt(p) * generalized_pauli(c.d, 0, i)
            for i, p in enumerate(c.probs)
            if p > 0.0
        ]
        return QuditChannel(c.d, c.d, kraus)
    if isinstance(c, Erasure):
        return QuditChannel(c.d, c.d + 1, [k for k in _erasure_kraus(c.d, c.p) if np.any(k)])
    if isinstance(c, AmplitudeDamping):
        return QuditChannel(2, 2, [k for k in _damping_kraus(c.p) if np.any(k)])
    raise NotDVFamilyError(f"{c.family} is not a discrete-variable channel")


def dv_choi(c: ChannelSpec) -> DensityMatrix:
    """Exact Choi matrix (I ⊗ E)(Φ); erasure lives on d × (d+1)."""
    if isinstance(c, (PauliQudit, Depolarizing, Dephasing)):
        d = c.d
        rho = np.zeros((d * d, d * d), dtype=complex)
        for k, p in enumerate(pauli_probabilities(c)):
            if p > 0.0:
                v = bell_state(d, *divmod(k, d))
                rho += p * np.outer(v, v.conj())
        return DensityMatrix(0.5 * (rho + rho.conj().T), dims=(d, d))
    if isinstance(c, Erasure):
        d = c.d
        embed = np.zeros((d * (d + 1), d * d))
        for i in range(d):
            for j in range(d):
                embed[i * (d + 1) + j, i * d + j] = 1.0
        flag = np.zeros((d + 1, d + 1))
        flag[d, d] = 1.0
        rho = (1.0 - c.p) * embed @ maximally_entangled(d) @ embed.T + (c.p / d) * np.kron(np.eye(d), flag)
        return DensityMatrix(rho, dims=(d, d + 1))
    if isinstance(c, AmplitudeDamping):
        return choi_of(channel_kraus(c))
    raise NotDVFamilyError(f"{c.family} is not a discrete-variable channel")


def dv_separable_candidate(c: Union[ChannelSpec, QuditChannel]) -> DensityMatrix:
    """σ̃ = (1/d) Σ_i |i⟩⟨i| ⊗ E(|i⟩⟨i|): the Choi matrix with coherences between inputs removed."""
    ch = c if isinstance(c, QuditChannel) else channel_kraus(c)
    d = ch.dim_in
    sigma = np.zeros((d * ch.dim_out, d * ch.dim_out), dtype=complex)
    for i in range(d):
        ket = np.zeros((d, d))
        ket[i, i] = 1.0
        sigma += np.kron(ket, ch.apply(ket)) / d
    return DensityMatrix(0.5 * (sigma + sigma.conj().T), dims=(d, ch.dim_out))


def check_channel_stretch(c: ChannelSpec) -> StretchReport:
    """Tele-covariance verdict plus, when covariant, the Choi roundtrip distance."""
    ch = channel_kraus(c)
    if not is_tele_covariant(ch):
        logger.info(f"{c.label()} is not teleportation-covariant")
        return StretchReport(covariant=False, passed=False, dim_in=ch.dim_in, dim_out=ch.dim_out)
    return stretch_check(ch)
