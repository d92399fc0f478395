"""Pydantic schemas for channel specifications and their flat text grammar.

Grammar: ``family:key=value{,key=value}``. A list-valued key takes every
following comma-separated token up to the next ``key=``, e.g.
``pauli:d=2,p=0.7,0.1,0.1,0.1``.
"""
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator
from typing import Annotated, Dict, List, Literal, Tuple, Union
import math

from twoway.core.config import settings
from twoway.core.errors import DomainError, ParseError


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    @property
    def is_gaussian(self) -> bool:
        return False

    def label(self) -> str:
        params = ",".join(f"{k}={_fmt(v)}" for k, v in self.model_dump(exclude={"family"}).items())
        return f"{self.family}:{params}" if params else self.family


def _fmt(value) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(_fmt(v) for v in value)
    return f"{value:g}" if isinstance(value, float) else str(value)


def _check_probabilities(probs: Tuple[float, ...], expected: int, what: str) -> Tuple[float, ...]:
    if len(probs) != expected:
        raise ValueError(f"{what} needs {expected} probabilities, got {len(probs)}")
    if any(p < 0.0 for p in probs):
        raise ValueError(f"{what} probabilities must be nonnegative")
    if abs(sum(probs) - 1.0) > settings.probability_tol:
        raise ValueError(f"{what} probabilities sum to {sum(probs):.15g}, not 1")
    return probs


# ---- Gaussian canonical forms ---------------------------------------------

class _GaussianSpec(_Spec):
    @property
    def is_gaussian(self) -> bool:
        return True


class ThermalLoss(_GaussianSpec):
    family: Literal["thermal-loss"] = "thermal-loss"
    eta: float = Field(ge=0.0, le=1.0)
    nbar: float = Field(default=0.0, ge=0.0)

    def label(self) -> str:
        if self.nbar == 0.0:
            return f"lossy:eta={self.eta:g}"
        return super().label()


class Amplifier(_GaussianSpec):
    family: Literal["amplifier"] = "amplifier"
    g: float = Field(gt=1.0)
    nbar: float = Field(default=0.0, ge=0.0)


class AdditiveNoise(_GaussianSpec):
    family: Literal["additive"] = "additive"
    xi: float = Field(ge=0.0)


class ConjugateAmplifier(_GaussianSpec):
    family: Literal["conjugate-amplifier"] = "conjugate-amplifier"


class FormA2(_GaussianSpec):
    family: Literal["form-a2"] = "form-a2"


class FormB1(_GaussianSpec):
    family: Literal["form-b1"] = "form-b1"


# ---- Discrete-variable families -------------------------------------------

class _DVSpec(_Spec):
    @property
    def dim_in(self) -> int:
        return getattr(self, "d", 2)

    @property
    def dim_out(self) -> int:
        return self.dim_in


class PauliQudit(_DVSpec):
    """Pauli channel Σ p_ab U_ab ρ U_ab†, probabilities flattened as index a·d + b."""

    family: Literal["pauli"] = "pauli"
    d: int = Field(default=2, ge=2)
    probs: Tuple[float, ...]

    @model_validator(mode="after")
    def _normalized(self):
        _check_probabilities(self.probs, self.d * self.d, "Pauli channel")
        return self


class Depolarizing(_DVSpec):
    family: Literal["depolarizing"] = "depolarizing"
    d: int = Field(default=2, ge=2)
    p: float = Field(ge=0.0, le=1.0)


class Dephasing(_DVSpec):
    family: Literal["dephasing"] = "dephasing"
    d: int = Field(default=2, ge=2)
    probs: Tuple[float, ...]

    @model_validator(mode="after")
    def _normalized(self):
        _check_probabilities(self.probs, self.d, "Dephasing channel")
        return self


class Erasure(_DVSpec):
    family: Literal["erasure"] = "erasure"
    d: int = Field(default=2, ge=2)
    p: float = Field(ge=0.0, le=1.0)

    @property
    def dim_out(self) -> int:
        return self.d + 1


class AmplitudeDamping(_DVSpec):
    family: Literal["damping"] = "damping"
    p: float = Field(ge=0.0, le=1.0)


GaussianChannel = Union[ThermalLoss, Amplifier, AdditiveNoise, ConjugateAmplifier, FormA2, FormB1]
DVChannel = Union[PauliQudit, Depolarizing, Dephasing, Erasure, AmplitudeDamping]

ChannelSpec = Annotated[
    Union[
        ThermalLoss, Amplifier, AdditiveNoise, ConjugateAmplifier, FormA2, FormB1,
        PauliQudit, Depolarizing, Dephasing, Erasure, AmplitudeDamping,
    ],
    Field(discriminator="family"),
]

_channel_adapter = TypeAdapter(ChannelSpec)


def build_channel(data: Dict) -> ChannelSpec:
    """Validate a plain dict into a ChannelSpec, mapping pydantic errors to DomainError."""
    try:
        return _channel_adapter.validate_python(data)
    except ValidationError as e:
        raise DomainError(f"Invalid channel parameters: {e.errors()[0]['msg']}") from e


def lossy(eta: float) -> ThermalLoss:
    return ThermalLoss(eta=eta, nbar=0.0)


def qubit_dephasing(p: float) -> Dephasing:
    return Dephasing(d=2, probs=(1.0 - p, p))


# ---- Text grammar ----------------------------------------------------------

_KEYS = {
    "lossy": {"eta": "eta"},
    "thermal-loss": {"eta": "eta", "nbar": "nbar"},
    "amplifier": {"g": "g", "gain": "g", "eta": "g", "nbar": "nbar"},
    "additive": {"xi": "xi"},
    "conjugate-amplifier": {},
    "form-a2": {},
    "form-b1": {},
    "pauli": {"d": "d", "p": "probs", "probs": "probs"},
    "depolarizing": {"d": "d", "p": "p"},
    "dephasing": {"d": "d", "p": "probs", "probs": "probs"},
    "erasure": {"d": "d", "p": "p"},
    "damping": {"p": "p"},
}
_LIST_KEYS = {"probs"}


def _number(token: str, position: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"Expected a number, got '{token}'", position)
    if not math.isfinite(value):
        raise ParseError(f"Expected a finite number, got '{token}'", position)
    return value


def _tokenize(body: str, offset: int) -> List[Tuple[str, int]]:
    tokens = []
    start = 0
    for piece in body.split(","):
        tokens.append((piece.strip(), offset + start + (len(piece) - len(piece.lstrip()))))
        start += len(piece) + 1
    return tokens


def parse_channel_spec(text: str) -> ChannelSpec:
    """Parse e.g. ``thermal-loss:eta=0.5,nbar=1`` into a ChannelSpec."""
    raw = text.strip()
    lead = len(text) - len(text.lstrip())
    head, _, body = raw.partition(":")
    family = head.strip().lower()
    if family not in _KEYS:
        raise ParseError(f"Unknown channel family '{family}'", lead)
    allowed = _KEYS[family]

    values: Dict[str, List[float]] = {}
    key_positions: Dict[str, int] = {}
    current = None
    if body.strip():
        for token, pos in _tokenize(body, lead + len(head) + 1):
            if not token:
                raise ParseError("Empty parameter", pos)
            if "=" in token:
                key, _, value = token.partition("=")
                key = key.strip().lower()
                if key not in allowed:
                    raise ParseError(f"Unknown parameter '{key}' for family '{family}'", pos)
                current = allowed[key]
                if current in values:
                    raise ParseError(f"Parameter '{key}' given twice", pos)
                key_positions[current] = pos
                values[current] = [_number(value.strip(), pos + token.index("=") + 1)]
            else:
                if current is None:
                    raise ParseError(f"Value '{token}' has no parameter name", pos)
                values[current].append(_number(token, pos))

    for key, vals in values.items():
        if len(vals) > 1 and key not in _LIST_KEYS:
            raise ParseError(f"Parameter '{key}' takes a single value", key_positions[key])

    data: Dict = {k: (tuple(v) if k in _LIST_KEYS else v[0]) for k, v in values.items()}
    if "d" in data:
        if not float(data["d"]).is_integer():
            raise DomainError(f"Dimension must be an integer, got {data['d']}")
        data["d"] = int(data["d"])

    if family == "lossy":
        family = "thermal-loss"
        data["nbar"] = 0.0
    elif family == "pauli" and "d" not in data and "probs" in data:
        root = math.isqrt(len(data["probs"]))
        data["d"] = root if root * root == len(data["probs"]) else 2
    elif family == "dephasing" and "probs" in data:
        data["probs"] = _dephasing_probs(data["probs"], data.get("d", 2))
    data["family"] = family
    return build_channel(data)


def _dephasing_probs(probs: Tuple[float, ...], d: int) -> Tuple[float, ...]:
    """A single value p means P = (1−p, p/(d−1), …); a full list is taken as P."""
    if len(probs) == 1:
        p = probs[0]
        return (1.0 - p,) + (p / (d - 1),) * (d - 1)
    return probs
