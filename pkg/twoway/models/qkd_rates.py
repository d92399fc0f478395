"""
Ideal asymptotic secret-key rates of benchmark QKD protocols over a pure-loss
link of transmissivity η, for comparison against the secret-key capacity
−log₂(1−η). Ideal means infinite keys, unit efficiencies, no excess noise and
perfect reconciliation.
"""
from typing import Callable, Dict, Tuple, Union
import logging
import math

from twoway.core.errors import OutOfRangeError
from twoway.models.gaussian_calculus import s_entropy
from twoway.schemas.protocol import ProtocolId, parse_protocol
from twoway.utils.optimize import maximize_bounded

logger = logging.getLogger(__name__)

E = math.e
_SLOPE_ETAS = (1e-5, 1e-6)


def no_switching_rate(eta: float) -> float:
    """Coherent states with heterodyne detection, reverse reconciliation."""
    if eta >= 1.0:
        return math.inf
    return math.log2(eta / (E * (1.0 - eta))) + s_entropy((2.0 - eta) / (2.0 * eta))


def switching_rate(eta: float) -> float:
    """Coherent states with switched homodyne detection: half the capacity."""
    if eta >= 1.0:
        return math.inf
    return 0.5 * math.log2(1.0 / (1.0 - eta))


def cvmdi_symmetric_rate(eta: float) -> float:
    """Relay in the middle, η_A = η_B = √η."""
    if eta >= 1.0:
        return math.inf
    root = math.sqrt(eta)
    return math.log2(eta / (E * E * (1.0 - root))) + s_entropy(1.0 / root - 0.5)


def cvmdi_asymmetric_rate(eta_a: float, eta_b: float) -> float:
    gap = abs(eta_a - eta_b)
    return (
        s_entropy(1.0 / eta_b - 0.5)
        - s_entropy((2.0 - eta_a - eta_b) / (2.0 * gap))
        + math.log2(eta_a * eta_b / (E * gap))
    )


def twoway_heterodyne_rate(eta: float) -> float:
    if eta >= 1.0:
        return math.inf
    return 0.5 * (
        s_entropy((2.0 - eta + eta * eta) / (2.0 * eta * (1.0 + eta)))
        + math.log2(eta * (1.0 + eta) / (E * (1.0 - eta)))
    )


def twoway_homodyne_rate(eta: float) -> float:
    if eta >= 1.0:
        return math.inf
    return 0.25 * math.log2((1.0 + eta * eta) / (1.0 - eta))


def bb84_single_photon_rate(eta: float) -> float:
    return eta / 2.0


def decoy_rate(eta: float, mu: float = 1.0) -> float:
    """BB84 with weak coherent pulses of intensity μ and decoy states: e^{−μ}ημ/2."""
    return math.exp(-mu) * eta * mu / 2.0


def dvmdi_rate(eta_a: float, eta_b: float, mu_a: float = 1.0, mu_b: float = 1.0) -> float:
    """½ e^{−(μ_A+μ_B)} η_A η_B μ_A μ_B; only the product η_A η_B matters."""
    return 0.5 * math.exp(-(mu_a + mu_b)) * eta_a * eta_b * mu_a * mu_b


def optimal_intensity(protocol: str, eta: float = 1.0, mu_max: float = 10.0) -> Tuple[float, float]:
    """(μ*, rate at μ*) for the intensity-dependent DV protocols.

    For dvmdi both emitters share the intensity, which is where the optimum sits.
    """
    if protocol == "bb84-decoy":
        objective = lambda mu: decoy_rate(eta, mu)
    elif protocol == "dvmdi":
        objective = lambda mu: dvmdi_rate(eta, 1.0, mu, mu)
    else:
        raise OutOfRangeError(f"{protocol} has no source intensity to optimize")
    return maximize_bounded(objective, 0.0, mu_max)


_CLOSED_FORMS: Dict[str, Callable[[float], float]] = {
    "no-switching": no_switching_rate,
    "switching": switching_rate,
    "cvmdi-sym": cvmdi_symmetric_rate,
    "twoway-het": twoway_heterodyne_rate,
    "twoway-hom": twoway_homodyne_rate,
    "bb84-1ph": bb84_single_photon_rate,
    "bb84-decoy": decoy_rate,
    "dvmdi": lambda eta: dvmdi_rate(eta, 1.0),
}


def _as_protocol(p: Union[ProtocolId, str]) -> ProtocolId:
    return p if isinstance(p, ProtocolId) else parse_protocol(p)


def raw_rate(p: Union[ProtocolId, str], eta: float) -> float:
    """Closed-form rate before clamping; may be negative (CV-MDI at high loss)."""
    p = _as_protocol(p)
    if not 0.0 < eta <= 1.0:
        raise OutOfRangeError(f"transmissivity must be in (0, 1], got {eta}")
    if p.name != "cvmdi-asym":
        return _CLOSED_FORMS[p.name](eta)

    eta_a = p.eta_a
    eta_b = eta / eta_a
    if eta_b > 1.0:
        raise OutOfRangeError(f"η={eta} exceeds the Alice-relay transmissivity η_A={eta_a}")
    if abs(eta_a - eta_b) < 1e-12:
        logger.debug("Relay is symmetric; using the symmetric CV-MDI rate")
        return cvmdi_symmetric_rate(eta)
    return cvmdi_asymmetric_rate(eta_a, eta_b)


def rate_with_flag(p: Union[ProtocolId, str], eta: float) -> Tuple[float, bool]:
    """(rate clamped at 0, whether clamping happened)."""
    value = raw_rate(p, eta)
    if value < 0.0:
        return 0.0, True
    return value, False


def ideal_rate(p: Union[ProtocolId, str], eta: float, clamp: bool = True) -> float:
    """Maximum key rate in bits per use at transmissivity η."""
    return rate_with_flag(p, eta)[0] if clamp else raw_rate(p, eta)


def asymptotic_slope(p: Union[ProtocolId, str]) -> float:
    """lim_{η→0} rate/η by Richardson extrapolation from η = 1e-5 and 1e-6."""
    p = _as_protocol(p)
    coarse, fine = (ideal_rate(p, eta) / eta for eta in _SLOPE_ETAS)
    if abs(coarse - fine) > 0.01 * max(abs(fine), 1e-300):
        logger.warning(f"{p.token}: rate/η differs by more than 1% between η=1e-5 and η=1e-6")
    return (10.0 * fine - coarse) / 9.0
