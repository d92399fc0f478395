"""Pydantic schemas for bound reports, sweeps and verification harnesses."""
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator
from typing import List, Literal, Optional, Union
import math


def extended_real(value: Optional[float]) -> Union[float, str, None]:
    """JSON has no infinity; render it as the string "Infinity"."""
    if value is not None and math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return value


class BoundReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: Optional[float]  # None: not computed
    upper: float
    exact: bool
    lower_name: str
    upper_name: str
    clamped: bool = False
    raw_lower: Optional[float] = None

    @model_validator(mode="after")
    def _ordered(self):
        if self.lower is not None and self.lower > self.upper + 1e-9:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        if self.exact and self.lower is not None and not _same(self.lower, self.upper):
            raise ValueError("exact report with distinct bounds")
        return self

    @field_serializer("lower", "upper", "raw_lower")
    def _serialize_extended(self, value: Optional[float]):
        return extended_real(value)

    @property
    def capacity(self) -> Optional[float]:
        return self.upper if self.exact else None


def _same(a: float, b: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) < 1e-12


class SweepConfig(BaseModel):
    spec: str
    axis: Optional[str] = None
    start: float
    stop: float
    points: int = Field(ge=2)
    distance_mode: bool = False
    fmt: Literal["csv", "json"] = "csv"
    out: Optional[str] = None
    series: List[str] = Field(default_factory=lambda: ["lower", "upper"])
    mbar: Optional[float] = Field(default=None, ge=0.0)

    @model_validator(mode="after")
    def _range(self):
        if self.distance_mode and min(self.start, self.stop) < 0.0:
            raise ValueError("distances must be nonnegative")
        return self


class LimitRow(BaseModel):
    mu: float
    numeric: float
    closed_form: float
    diff: float
    scaled: float

    @field_serializer("numeric", "closed_form", "diff", "scaled")
    def _serialize_extended(self, value: float):
        return extended_real(value)


class StretchReport(BaseModel):
    covariant: bool
    distance: Optional[float] = None
    passed: bool
    dim_in: int
    dim_out: int


# ---- HTTP request/response bodies -----------------------------------------

class CapacityRequest(BaseModel):
    spec: str


class QkdRateRequest(BaseModel):
    # relay parameters travel in the protocol token, e.g. "cvmdi-asym:eta_a=0.5"
    model_config = ConfigDict(extra="forbid")

    protocol: str
    eta: Optional[float] = None
    distance_km: Optional[float] = Field(default=None, ge=0.0)


class QkdRateResponse(BaseModel):
    protocol: str
    eta: float
    rate: float
    clamped: bool
    capacity: float

    @field_serializer("rate", "capacity")
    def _serialize_rates(self, value: float):
        return extended_real(value)


class VerifyLimitRequest(BaseModel):
    spec: str
    mu_list: Optional[List[float]] = None


class VerifyLimitResponse(BaseModel):
    spec: str
    rows: List[LimitRow]
    passed: bool
