"""
Capacity calculus for composed scenarios: fading ensembles, forward/backward
channel pairs, multiband channels and multimode fibres.
"""
from pydantic import BaseModel, ConfigDict, model_validator
from typing import List, Optional, Sequence, Tuple
import logging
import math

from twoway.core.config import settings
from twoway.core.errors import DomainError, OutOfRangeError, ParseError
from twoway.models.bounds import entanglement_flux, two_way_capacity
from twoway.schemas.channel import ChannelSpec, lossy, parse_channel_spec
from twoway.schemas.report import BoundReport

logger = logging.getLogger(__name__)


class ChannelEnsemble(BaseModel):
    """Fading channel: member E_i occurs with probability p_i."""

    model_config = ConfigDict(frozen=True)

    members: Tuple[Tuple[float, ChannelSpec], ...]

    @model_validator(mode="after")
    def _normalized(self):
        if not self.members:
            raise ValueError("ensemble needs at least one member")
        weights = [w for w, _ in self.members]
        if any(w < 0.0 or w > 1.0 for w in weights):
            raise ValueError("ensemble weights must lie in [0, 1]")
        if abs(sum(weights) - 1.0) > settings.probability_tol:
            raise ValueError(f"ensemble weights sum to {sum(weights):.15g}, not 1")
        return self


def fading_bound(e: ChannelEnsemble) -> float:
    """Σ p_i Φ(E_i); +∞ if any member with nonzero weight has infinite flux."""
    total = 0.0
    for weight, member in e.members:
        if weight == 0.0:
            continue
        flux = entanglement_flux(member)
        if math.isinf(flux):
            logger.warning(f"Fading member {member.label()} has infinite flux; bound diverges")
            return math.inf
        total += weight * flux
    return total


def fading_report(e: ChannelEnsemble) -> BoundReport:
    """Upper bound only; the lower bound is reported as not computed."""
    upper = fading_bound(e)
    if upper <= 0.0:
        return BoundReport(lower=0.0, upper=0.0, exact=True,
                           lower_name="trivial", upper_name="fading-flux")
    return BoundReport(lower=None, upper=upper, exact=False,
                       lower_name="not-computed", upper_name="fading-flux")


def two_way_pair(forward: ChannelSpec, backward: ChannelSpec) -> BoundReport:
    """Forward channel E and backward channel E′ used at will: the better one wins."""
    a = two_way_capacity(forward)
    b = two_way_capacity(backward)
    # full keys so that ties resolve the same way in either argument order
    lower_src = max((a, b), key=_lower_key)
    upper_src = max((a, b), key=_upper_key)
    exact = a.exact and b.exact
    lower = upper_src.upper if exact else lower_src.lower
    return BoundReport(
        lower=lower,
        upper=upper_src.upper,
        exact=exact,
        lower_name=lower_src.lower_name,
        upper_name=upper_src.upper_name,
        clamped=lower_src.clamped,
        raw_lower=lower_src.raw_lower,
    )


def _lower_key(r: BoundReport):
    raw = -math.inf if r.raw_lower is None else r.raw_lower
    return (r.lower, r.lower_name, r.clamped, raw)


def _upper_key(r: BoundReport):
    return (r.upper, r.upper_name)


def multiband(bands: Sequence[ChannelSpec]) -> BoundReport:
    """Independent bands used in parallel; bounds add up."""
    if not bands:
        raise DomainError("multiband needs at least one band")
    reports = [two_way_capacity(c) for c in bands]
    upper = sum(r.upper for r in reports)
    if math.isinf(upper):
        logger.warning("A band has infinite upper bound; the multiband bound diverges")
    lower = sum(r.lower for r in reports)
    exact = all(r.exact for r in reports)
    if exact:
        lower = upper
    return BoundReport(
        lower=lower,
        upper=upper,
        exact=exact,
        lower_name=_joined(r.lower_name for r in reports),
        upper_name=_joined(r.upper_name for r in reports),
        clamped=any(r.clamped for r in reports),
    )


def _joined(names) -> str:
    unique = sorted(set(names))
    return f"sum({unique[0]})" if len(unique) == 1 else "sum(" + "+".join(unique) + ")"


def fiber(modes: int, eta: float) -> BoundReport:
    """Multimode fibre with W modes of identical transmissivity η."""
    if modes < 1:
        raise OutOfRangeError(f"fibre needs at least one mode, got {modes}")
    return multiband([lossy(eta)] * modes)


def km_to_eta(km: float, db_per_km: Optional[float] = None) -> float:
    """η = 10^(−α·km/10) for an attenuation α in dB/km."""
    if km < 0.0:
        raise OutOfRangeError(f"distance must be nonnegative, got {km}")
    alpha = settings.loss_db_per_km if db_per_km is None else db_per_km
    return 10.0 ** (-alpha * km / 10.0)


# ---- Text grammar ----------------------------------------------------------

def _split(text: str) -> List[Tuple[str, int]]:
    pieces = []
    start = 0
    for piece in text.split(";"):
        pieces.append((piece, start))
        start += len(piece) + 1
    return pieces


def _parse_at(piece: str, offset: int) -> ChannelSpec:
    if not piece.strip():
        raise ParseError("Empty channel entry", offset)
    try:
        return parse_channel_spec(piece)
    except ParseError as e:
        raise ParseError(e.message, offset + e.position) from e


def parse_bands(text: str) -> List[ChannelSpec]:
    """``spec;spec;…``"""
    return [_parse_at(piece, offset) for piece, offset in _split(text)]


def parse_ensemble(text: str) -> ChannelEnsemble:
    """``w@spec;w@spec;…``; without weights the members are equiprobable."""
    entries = []
    for piece, offset in _split(text):
        if "@" in piece:
            weight_text, _, spec_text = piece.partition("@")
            try:
                weight = float(weight_text)
            except ValueError:
                raise ParseError(f"Expected a weight, got '{weight_text.strip()}'", offset)
            entries.append((weight, _parse_at(spec_text, offset + len(weight_text) + 1)))
        else:
            entries.append((None, _parse_at(piece, offset)))

    given = [w for w, _ in entries if w is not None]
    if given and len(given) != len(entries):
        raise ParseError("Either every ensemble member has a weight or none does", 0)
    if not given:
        entries = [(1.0 / len(entries), c) for _, c in entries]
    try:
        return ChannelEnsemble(members=tuple(entries))
    except ValueError as e:
        raise DomainError(f"Invalid ensemble: {e}") from e
