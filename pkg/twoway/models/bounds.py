"""
Capacity bounds for two-way assisted quantum communication.

Lower bounds come from coherent and reverse coherent information (or a
distillation strategy). Upper bounds come from the entanglement flux, which
is the relative entropy of entanglement of the Choi matrix, from squashed
entanglement and from dimensionality. Where the bounds meet, the capacity
is exact. Rates are in bits per channel use and may be +∞.
"""
from typing import List, Optional, Sequence, Tuple
import logging
import math
import numpy as np

from twoway.core.config import settings
from twoway.core.errors import DivergentAtZeroError, OutOfRangeError, UnsupportedChannelError
from twoway.models.channels import (
    closest_separable_cm,
    gaussian_choi_cm,
    is_entanglement_breaking,
    pauli_probabilities,
)
from twoway.models.gaussian_calculus import GaussianState, h_entropy, relative_entropy, s_entropy
from twoway.models.symplectic import validate_cm
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
    parse_channel_spec,
)
from twoway.schemas.report import BoundReport, LimitRow
from twoway.utils.constants import CC_COST_LIMIT, LN2
from twoway.utils.entropy import binary_entropy, shannon_entropy
from twoway.utils.optimize import maximize_bounded, minimize_bounded

logger = logging.getLogger(__name__)

INF = math.inf


def _log2(x: float) -> float:
    return -INF if x == 0.0 else math.log2(x)


def _clamp(value: float, name: str, clamp: bool) -> float:
    if clamp and value < 0.0:
        logger.debug(f"{name} = {value:.6g} clamped to 0")
        return 0.0
    return value


# ---- Closed-form building blocks -------------------------------------------

def _thermal_loss_rci(eta: float, nbar: float) -> float:
    if eta >= 1.0:
        return INF
    return -math.log2(1.0 - eta) - h_entropy(nbar)


def _thermal_loss_flux(eta: float, nbar: float) -> float:
    if eta >= 1.0:
        return INF
    if eta <= 0.0 or nbar >= eta / (1.0 - eta):
        return 0.0
    return -math.log2(1.0 - eta) - nbar * math.log2(eta) - h_entropy(nbar)


def _amplifier_ci(g: float, nbar: float) -> float:
    return math.log2(g) - math.log2(g - 1.0) - h_entropy(nbar)


def _amplifier_flux(g: float, nbar: float) -> float:
    if nbar >= 1.0 / (g - 1.0):
        return 0.0
    return (nbar + 1.0) * math.log2(g) - math.log2(g - 1.0) - h_entropy(nbar)


def _additive_ci(xi: float) -> float:
    if xi <= 0.0:
        return INF
    return -math.log2(xi) - 1.0 / LN2


def _additive_flux(xi: float) -> float:
    if xi <= 0.0:
        return INF
    if xi >= 1.0:
        return 0.0
    return (xi - 1.0) / LN2 - math.log2(xi)


def depolarizing_kappa(d: int, p: float) -> float:
    """κ(d,p) = log₂d − H₂(f) − f log₂(d−1) with f = p(d²−1)/d²."""
    f = p * (d * d - 1) / (d * d)
    return math.log2(d) - binary_entropy(f) - f * math.log2(d - 1)


def pauli_qudit_upper(d: int, probs) -> float:
    """log₂d − H({p_ab}) + H({p_a}), with p_a = Σ_b p_ab."""
    probs = np.asarray(probs, dtype=float)
    marginal = probs.reshape(d, d).sum(axis=1)
    return math.log2(d) - shannon_entropy(probs) + shannon_entropy(marginal)


def _unital_dv_rci(c: ChannelSpec) -> float:
    """log₂d − S(ρ_E); the Choi spectrum of a Pauli channel is its probability vector."""
    if isinstance(c, Depolarizing):
        f = c.p * (c.d * c.d - 1) / (c.d * c.d)
        return depolarizing_kappa(c.d, c.p) - f * math.log2(c.d + 1)
    if isinstance(c, Dephasing):
        return math.log2(c.d) - shannon_entropy(c.probs)
    return math.log2(c.d) - shannon_entropy(pauli_probabilities(c))


def damping_rci(p: float) -> float:
    """max_u {H₂(u) − H₂(up)}."""
    _, value = maximize_bounded(lambda u: binary_entropy(u) - binary_entropy(u * p), 0.0, 1.0)
    return max(value, 0.0)


def damping_unassisted_q1(p: float) -> float:
    """Coherent information max_u {H₂(u(1−p)) − H₂(up)}; zero for p ≥ 1/2."""
    _, value = maximize_bounded(
        lambda u: binary_entropy(u * (1.0 - p)) - binary_entropy(u * p), 0.0, 1.0
    )
    return value


def damping_ree_bound(p: float) -> float:
    return min(1.0, -_log2(p))


def erasure_one_way_rates(d: int, p: float) -> Tuple[float, float]:
    """(I_C, I_RC) = ((1−2p)log₂d, (1−p)log₂d − H₂(p))."""
    return (1.0 - 2.0 * p) * math.log2(d), (1.0 - p) * math.log2(d) - binary_entropy(p)


def erasure_strategy_bound(d: int, p: float) -> float:
    """Entanglement distillation over the unerased fraction of uses."""
    return (1.0 - p) * math.log2(d)


# ---- One-way information quantities ----------------------------------------

def reverse_coherent_info(c: ChannelSpec, clamp: bool = True) -> float:
    """I_RC of the Choi matrix (μ → ∞ for Gaussian channels)."""
    if isinstance(c, ThermalLoss):
        value = _thermal_loss_rci(c.eta, c.nbar)
    elif isinstance(c, AdditiveNoise):
        value = _additive_ci(c.xi)
    elif isinstance(c, (PauliQudit, Depolarizing, Dephasing)):
        value = _unital_dv_rci(c)
    elif isinstance(c, AmplitudeDamping):
        value = damping_rci(c.p)
    else:
        raise UnsupportedChannelError(f"No reverse coherent information closed form for {c.family}")
    return _clamp(value, "reverse coherent information", clamp)


def coherent_info(c: ChannelSpec, clamp: bool = True) -> float:
    """I_C of the Choi matrix (μ → ∞ for Gaussian channels)."""
    if isinstance(c, Amplifier):
        value = _amplifier_ci(c.g, c.nbar)
    elif isinstance(c, AdditiveNoise):
        value = _additive_ci(c.xi)
    elif isinstance(c, (PauliQudit, Depolarizing, Dephasing)):
        value = _unital_dv_rci(c)
    elif isinstance(c, AmplitudeDamping):
        value = damping_unassisted_q1(c.p)
    else:
        raise UnsupportedChannelError(f"No coherent information closed form for {c.family}")
    return _clamp(value, "coherent information", clamp)


def finite_mu_rci(c: ChannelSpec, mu: float) -> float:
    """I(A⟨B) = s(μ) − s(ν₋) − s(ν₊) for the quasi-Choi state at finite μ."""
    q = gaussian_choi_cm(c, mu)
    nu = validate_cm(q.cm).eigenvalues
    return float(s_entropy(mu) - np.sum(s_entropy(nu)))


def finite_mu_ci(c: ChannelSpec, mu: float) -> float:
    """I(A⟩B) = s(β) − s(ν₋) − s(ν₊) for the quasi-Choi state at finite μ."""
    q = gaussian_choi_cm(c, mu)
    nu = validate_cm(q.cm).eigenvalues
    return float(s_entropy(q.beta) - np.sum(s_entropy(nu)))


# ---- Upper bounds ----------------------------------------------------------

def entanglement_flux(c: ChannelSpec) -> float:
    """Closed-form REE of the (asymptotic) Choi matrix."""
    if isinstance(c, ThermalLoss):
        return _thermal_loss_flux(c.eta, c.nbar)
    if isinstance(c, Amplifier):
        return _amplifier_flux(c.g, c.nbar)
    if isinstance(c, AdditiveNoise):
        return _additive_flux(c.xi)
    if isinstance(c, (ConjugateAmplifier, FormA2)):
        return 0.0
    if isinstance(c, FormB1):
        return INF
    if isinstance(c, PauliQudit):
        if c.d == 2:
            p_max = max(c.probs)
            return 1.0 - binary_entropy(p_max) if p_max >= 0.5 else 0.0
        return min(math.log2(c.d), pauli_qudit_upper(c.d, c.probs))
    if isinstance(c, Depolarizing):
        return depolarizing_kappa(c.d, c.p) if c.p <= c.d / (c.d + 1.0) else 0.0
    if isinstance(c, Dephasing):
        return math.log2(c.d) - shannon_entropy(c.probs)
    if isinstance(c, Erasure):
        return erasure_strategy_bound(c.d, c.p)
    if isinstance(c, AmplitudeDamping):
        return damping_ree_bound(c.p)
    raise UnsupportedChannelError(f"Unknown channel family {c.family}")


def flux_numeric_limit(c: ChannelSpec, mu: float) -> float:
    """S(ρ_E^μ ‖ σ̃_s^μ) at finite μ; tends to entanglement_flux as μ → ∞."""
    if is_entanglement_breaking(c):
        logger.debug(f"{c.label()} is entanglement-breaking: flux 0")
        return 0.0
    if mu < 10.0:
        logger.warning(f"flux_numeric_limit at μ={mu} is far from the asymptotic regime")
    q = gaussian_choi_cm(c, mu)
    reference = closest_separable_cm(q)
    if reference.already_separable:
        return 0.0
    return relative_entropy(GaussianState.centered(q.cm), GaussianState.centered(reference.cm))


def _squashed_profile(p: float, gamma: float, eta: float) -> float:
    return 0.5 * (
        binary_entropy(gamma - p * gamma * eta)
        + binary_entropy(gamma * (1.0 - p + p * eta))
        - binary_entropy(p * gamma * (1.0 - eta))
        - binary_entropy(p * gamma * eta)
    )


def squashed_inner_minimum(p: float, gamma: float) -> Tuple[float, float]:
    """(argmin_η, min_η) of the squashing profile at fixed input weight γ."""
    return minimize_bounded(lambda eta: _squashed_profile(p, gamma, eta), 0.0, 1.0)


def squashed_damping_bound(p: float, general: bool = False) -> float:
    """Squashed-entanglement bound for amplitude damping.

    The default is the closed form H₂(½ − p/4) − H₂(1 − p/4), with a balanced
    damping squashing channel and a maximally mixed input. With `general=True`
    the full max_γ min_η problem is solved by nested bounded searches.
    """
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"damping probability must be in [0, 1], got {p}")
    if not general:
        return binary_entropy(0.5 - p / 4.0) - binary_entropy(1.0 - p / 4.0)

    def inner(gamma: float) -> float:
        eta_star, value = squashed_inner_minimum(p, gamma)
        if abs(eta_star - 0.5) > 1e-4 and abs(value - _squashed_profile(p, gamma, 0.5)) > 1e-9:
            logger.warning(f"Squashing minimum at η={eta_star:.6f}, not 1/2 (p={p}, γ={gamma})")
        return value

    _, value = maximize_bounded(inner, 0.0, 1.0)
    return max(value, 0.0)


def half_assisted_capacity(p: float) -> float:
    """½ C_A = ½ max_γ {H₂(γ) + H₂(γ(1−p)) − H₂(pγ)}, the identity-squashing bound."""
    _, value = maximize_bounded(
        lambda g: binary_entropy(g) + binary_entropy(g * (1.0 - p)) - binary_entropy(p * g), 0.0, 1.0
    )
    return 0.5 * value


def squashed_crossover(grid_points: int = 2001) -> float:
    """Largest p such that the squashed bound stays ≤ min{1, −log₂p} on [0, p]."""
    grid = np.linspace(0.0, 1.0, grid_points)
    ok = np.array([squashed_damping_bound(p) <= damping_ree_bound(p) + 1e-12 for p in grid])
    if ok.all():
        return 1.0
    first_bad = int(np.argmin(ok))
    return float(grid[max(first_bad - 1, 0)])


def tgw_bound(eta: float, nbar: Optional[float] = None, mbar: Optional[float] = None) -> float:
    """Squashed-entanglement comparison bound for (thermal-)loss channels.

    - default: lossy form log₂((1+η)/(1−η))
    - `nbar`:  log₂[((1−η)n̄+1+η)/((1−η)n̄+1−η)]
    - `mbar`:  energy-constrained form h((1+η)m̄/2) − h((1−η)m̄/2)
    """
    if not 0.0 <= eta <= 1.0:
        raise OutOfRangeError(f"TGW bound needs η in [0, 1], got {eta}")
    if mbar is not None:
        return h_entropy((1.0 + eta) * mbar / 2.0) - h_entropy((1.0 - eta) * mbar / 2.0)
    if eta == 1.0:
        return INF
    n = 0.0 if nbar is None else nbar
    return math.log2(((1.0 - eta) * n + 1.0 + eta) / ((1.0 - eta) * n + 1.0 - eta))


def constrained_rci(eta: float, mbar: float) -> float:
    """h(m̄) − h((1−η)m̄) for a lossy channel with mean input photon number m̄."""
    if not 0.0 <= eta <= 1.0 or mbar < 0.0:
        raise OutOfRangeError(f"constrained RCI needs η ∈ [0,1], m̄ ≥ 0; got η={eta}, m̄={mbar}")
    return h_entropy(mbar) - h_entropy((1.0 - eta) * mbar)


def cc_cost(eta: float) -> float:
    """Classical bits per use spent by the reverse-coherent key protocol over a lossy channel."""
    if eta <= 0.0:
        raise DivergentAtZeroError(f"cc_cost is defined on (0, 1]; the η→0 limit is {CC_COST_LIMIT:.6f}")
    if eta > 1.0:
        raise OutOfRangeError(f"cc_cost needs η ≤ 1, got {eta}")
    return (
        2.0 * eta * math.log2(math.pi)
        + (2.0 * eta - 3.0) * math.log2(3.0 - 2.0 * eta)
        + 3.0 * math.log2(3.0)
    ) / (2.0 * eta)


def cc_cost_limit() -> float:
    """log₂(3πe), approached as η → 0."""
    return CC_COST_LIMIT


# ---- Convergence harness ---------------------------------------------------

def flux_limit_rows(c: ChannelSpec, mu_list: Optional[Sequence[float]] = None) -> List[LimitRow]:
    """(μ, S^μ, Φ, |S^μ − Φ|, |S^μ − Φ|·μ) for each μ."""
    closed = entanglement_flux(c)
    rows = []
    for mu in (settings.default_mu_list if mu_list is None else mu_list):
        numeric = flux_numeric_limit(c, mu)
        diff = abs(numeric - closed) if not (math.isinf(numeric) and numeric == closed) else 0.0
        rows.append(LimitRow(mu=mu, numeric=numeric, closed_form=closed, diff=diff, scaled=diff * mu))
        logger.debug(f"μ={mu:g}: S^μ={numeric:.12g}, Φ={closed:.12g}, diff·μ={diff * mu:.3e}")
    return rows


def limit_rows_pass(rows: Sequence[LimitRow]) -> bool:
    """False if |diff|·μ exceeds the configured bound or grows along the μ list."""
    if not rows:
        return True
    scaled = [r.scaled for r in rows]
    if max(scaled) > settings.verify_limit_bound:
        return False
    return not (scaled[-1] > 2.0 * scaled[0] and scaled[-1] > 1e-6)


# ---- Assembly --------------------------------------------------------------

def _is_distillable(c: ChannelSpec) -> bool:
    if isinstance(c, ThermalLoss):
        return c.nbar == 0.0
    if isinstance(c, Amplifier):
        return c.nbar == 0.0
    return isinstance(c, (Dephasing, Erasure))


def _best_lower(c: ChannelSpec) -> Tuple[Optional[float], float, str]:
    """(clamped lower, raw lower, name)."""
    if isinstance(c, Erasure):
        value = erasure_strategy_bound(c.d, c.p)
        return value, value, "distillation-strategy"
    if isinstance(c, (ConjugateAmplifier, FormA2)):
        return 0.0, 0.0, "trivial"
    if isinstance(c, FormB1):
        return 0.0, 0.0, "trivial"

    candidates = []
    for name, fn in (("reverse-coherent-information", reverse_coherent_info),
                     ("coherent-information", coherent_info)):
        try:
            candidates.append((fn(c, clamp=False), name))
        except UnsupportedChannelError:
            continue
    raw, name = max(candidates, key=lambda item: item[0])
    return max(raw, 0.0), raw, name


def _best_upper(c: ChannelSpec) -> Tuple[float, str]:
    candidates = [(entanglement_flux(c), "entanglement-flux")]
    if isinstance(c, AmplitudeDamping):
        candidates.append((squashed_damping_bound(c.p), "squashed-entanglement"))
    if not c.is_gaussian:
        candidates.append((math.log2(min(c.dim_in, c.dim_out)), "dimensionality"))
    return min(candidates, key=lambda item: item[0])


def two_way_capacity(c: ChannelSpec) -> BoundReport:
    """Best lower/upper bounds on Q₂ = D₂ = K for one channel."""
    lower, raw, lower_name = _best_lower(c)
    upper, upper_name = _best_upper(c)

    if _is_distillable(c):
        # Distillable: the lower bound is the flux expression with the same arithmetic
        upper, upper_name = entanglement_flux(c), "entanglement-flux"
        if not (lower == upper or abs(lower - upper) < 1e-12):
            logger.warning(f"{c.label()}: distillable bounds differ by {upper - lower:.3e}")
        exact = True
    else:
        exact = upper <= 0.0 or lower == upper
    if exact and upper <= 0.0:
        lower = upper = 0.0

    return BoundReport(
        lower=lower,
        upper=upper,
        exact=exact,
        lower_name=lower_name,
        upper_name=upper_name,
        clamped=raw < 0.0,
        raw_lower=raw,
    )


class CapacityEngine:
    """Text-level facade over the bounds for the CLI and HTTP API."""

    def __init__(self):
        logger.info("✅ Capacity engine initialized")

    def evaluate(self, spec: str) -> BoundReport:
        return two_way_capacity(parse_channel_spec(spec))
