"""
Parameter sweeps behind ``twoway sweep`` and the figure-data script.

A sweep varies one channel parameter (or, in distance mode, the fibre length
in km) over a linear grid and evaluates a list of named series at each point.
Rows are evaluated concurrently and emitted in grid order.
"""
from typing import Callable, Dict, List, Optional
import json
import logging
import math
import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from twoway.core.config import settings
from twoway.core.errors import DomainError, ParseError, UnsupportedChannelError
from twoway.models.bounds import (
    coherent_info,
    constrained_rci,
    cc_cost,
    damping_ree_bound,
    entanglement_flux,
    half_assisted_capacity,
    reverse_coherent_info,
    squashed_damping_bound,
    tgw_bound,
    two_way_capacity,
)
from twoway.models.composition import km_to_eta
from twoway.models.qkd_rates import ideal_rate
from twoway.schemas.channel import AmplitudeDamping, ChannelSpec, ThermalLoss, parse_channel_spec
from twoway.schemas.protocol import is_protocol_token, parse_protocol
from twoway.schemas.report import BoundReport, SweepConfig
from twoway.utils.constants import BOUND_SERIES, DEFAULT_AXIS

logger = logging.getLogger(__name__)


def _loss_eta(c: ChannelSpec, series: str) -> float:
    if not isinstance(c, ThermalLoss):
        raise UnsupportedChannelError(f"Series '{series}' needs a loss channel, got {c.family}")
    return c.eta


def _damping_p(c: ChannelSpec, series: str) -> float:
    if not isinstance(c, AmplitudeDamping):
        raise UnsupportedChannelError(f"Series '{series}' needs amplitude damping, got {c.family}")
    return c.p


def _needs_mbar(mbar: Optional[float], series: str) -> float:
    if mbar is None:
        raise DomainError(f"Series '{series}' needs a mean photon number (--mbar)")
    return mbar


def _capacity(report: BoundReport) -> float:
    return report.capacity if report.capacity is not None else math.nan


_SERIES: Dict[str, Callable[[ChannelSpec, BoundReport, Optional[float]], float]] = {
    "capacity": lambda c, r, m: _capacity(r),
    "lower": lambda c, r, m: math.nan if r.lower is None else r.lower,
    "upper": lambda c, r, m: r.upper,
    "flux": lambda c, r, m: entanglement_flux(c),
    "reverse-coherent-info": lambda c, r, m: reverse_coherent_info(c, clamp=False),
    "reverse-coherent-info-clamped": lambda c, r, m: reverse_coherent_info(c),
    "coherent-info": lambda c, r, m: coherent_info(c, clamp=False),
    "coherent-info-clamped": lambda c, r, m: coherent_info(c),
    "squashed": lambda c, r, m: squashed_damping_bound(_damping_p(c, "squashed")),
    "ree": lambda c, r, m: damping_ree_bound(_damping_p(c, "ree")),
    "half-assisted": lambda c, r, m: half_assisted_capacity(_damping_p(c, "half-assisted")),
    "tgw": lambda c, r, m: tgw_bound(_loss_eta(c, "tgw"), nbar=c.nbar or None),
    "constrained-rci": lambda c, r, m: constrained_rci(
        _loss_eta(c, "constrained-rci"), _needs_mbar(m, "constrained-rci")
    ),
    "constrained-tgw": lambda c, r, m: tgw_bound(
        _loss_eta(c, "constrained-tgw"), mbar=_needs_mbar(m, "constrained-tgw")
    ),
    "cc-cost": lambda c, r, m: cc_cost(_loss_eta(c, "cc-cost")),
}


def _check_series(series: List[str]) -> None:
    position = 0
    for name in series:
        if name not in BOUND_SERIES and not is_protocol_token(name):
            raise ParseError(f"Unknown series '{name}'", position)
        if is_protocol_token(name):
            parse_protocol(name)
        position += len(name) + 1


def _evaluate(name: str, c: ChannelSpec, report: BoundReport, mbar: Optional[float]) -> float:
    if name in _SERIES:
        return float(_SERIES[name](c, report, mbar))
    return ideal_rate(parse_protocol(name), _loss_eta(c, name))


def _point_spec(spec: str, axis: str, value: float) -> str:
    sep = "," if ":" in spec else ":"
    return f"{spec}{sep}{axis}={value!r}"


def _axis_for(spec: str, axis: Optional[str]) -> str:
    if axis:
        return axis
    family = spec.partition(":")[0].strip().lower()
    family = "thermal-loss" if family == "lossy" else family
    if family not in DEFAULT_AXIS:
        raise DomainError(f"No default sweep axis for '{family}'; pass --axis")
    return DEFAULT_AXIS[family]


def sweep_grid(cfg: SweepConfig) -> np.ndarray:
    return np.linspace(cfg.start, cfg.stop, cfg.points)


def run_sweep(cfg: SweepConfig) -> pd.DataFrame:
    """One row per grid point: column ``x`` then one column per series."""
    spec, series = cfg.spec, list(cfg.series)
    if is_protocol_token(spec):
        # A protocol alone sweeps a lossy link; its rate joins the series
        token = spec.strip()
        parse_protocol(token)
        spec = "lossy"
        if token not in series:
            series.append(token)
    _check_series(series)

    axis = "eta" if cfg.distance_mode else _axis_for(spec, cfg.axis)
    grid = sweep_grid(cfg)

    def row(x: float) -> List[float]:
        value = float(km_to_eta(x) if cfg.distance_mode else x)
        c = parse_channel_spec(_point_spec(spec, axis, value))
        report = two_way_capacity(c)
        return [float(x)] + [_evaluate(name, c, report, cfg.mbar) for name in series]

    points = tqdm(grid, desc="sweep", disable=not settings.show_progress)
    rows = Parallel(n_jobs=settings.sweep_jobs, prefer="threads")(delayed(row)(x) for x in points)
    logger.info(f"📈 Sweep of {cfg.spec} over {axis}: {len(rows)} points, {len(series)} series")
    return pd.DataFrame(rows, columns=["x"] + series)


def _json_value(value: float):
    if math.isnan(value):
        return None
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return value


def render_table(table: pd.DataFrame, fmt: str = "csv") -> str:
    """CSV with fixed 12-significant-digit floats, or JSON records with "Infinity"."""
    if fmt == "csv":
        digits = settings.csv_significant_digits
        return table.to_csv(index=False, float_format=f"%.{digits}g", na_rep="", lineterminator="\n")
    records = [
        {column: _json_value(float(value)) for column, value in record.items()}
        for record in table.to_dict(orient="records")
    ]
    return json.dumps(records, indent=2)


def write_table(table: pd.DataFrame, fmt: str = "csv", out: Optional[str] = None) -> str:
    text = render_table(table, fmt)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info(f"💾 Wrote {len(table)} rows to {out}")
    return text
