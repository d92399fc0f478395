"""Pydantic schema for benchmark QKD protocol identifiers and their CLI tokens."""
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Literal, Optional

from twoway.core.errors import ParseError
from twoway.utils.constants import PROTOCOL_TOKENS

ProtocolName = Literal[
    "no-switching",
    "switching",
    "cvmdi-sym",
    "cvmdi-asym",
    "twoway-het",
    "twoway-hom",
    "bb84-1ph",
    "bb84-decoy",
    "dvmdi",
]


class ProtocolId(BaseModel):
    """A protocol token. CV-MDI in the asymmetric setting carries Alice's link η_A."""

    model_config = ConfigDict(frozen=True)

    name: ProtocolName
    eta_a: Optional[float] = Field(default=None, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _relay(self):
        if self.name == "cvmdi-asym" and self.eta_a is None:
            raise ValueError("cvmdi-asym needs eta_a (Alice-relay transmissivity)")
        if self.name != "cvmdi-asym" and self.eta_a is not None:
            raise ValueError(f"{self.name} takes no eta_a")
        return self

    @property
    def token(self) -> str:
        return self.name if self.eta_a is None else f"{self.name}:eta_a={self.eta_a:g}"


def parse_protocol(text: str) -> ProtocolId:
    """``name`` or ``cvmdi-asym:eta_a=<value>``."""
    raw = text.strip()
    lead = len(text) - len(text.lstrip())
    head, sep, body = raw.partition(":")
    name = head.strip().lower()
    if name not in PROTOCOL_TOKENS:
        raise ParseError(f"Unknown protocol '{name}'", lead)

    eta_a = None
    if sep:
        position = lead + len(head) + 1
        key, eq, value = body.partition("=")
        if not eq or key.strip().lower() != "eta_a":
            raise ParseError(f"Expected eta_a=<value>, got '{body.strip()}'", position)
        try:
            eta_a = float(value)
        except ValueError:
            raise ParseError(f"Expected a number, got '{value.strip()}'", position + len(key) + 1)
    try:
        return ProtocolId(name=name, eta_a=eta_a)
    except ValueError as e:
        raise ParseError(f"Invalid protocol: {e.errors()[0]['msg'] if hasattr(e, 'errors') else e}", lead)


def is_protocol_token(text: str) -> bool:
    return text.strip().partition(":")[0].strip().lower() in PROTOCOL_TOKENS
