import json
import math
import pandas as pd
import pytest

from twoway.core.errors import DomainError, ParseError, UnsupportedChannelError
from twoway.models.sweeps import _axis_for, _point_spec, render_table, run_sweep, write_table
from twoway.schemas.report import SweepConfig


def test_transmissivity_sweep():
    table = run_sweep(SweepConfig(spec="lossy", start=0.1, stop=0.9, points=9, series=["capacity", "tgw"]))
    assert list(table.columns) == ["x", "capacity", "tgw"]
    assert len(table) == 9
    assert table["capacity"][4] == pytest.approx(1.0)
    assert (table["tgw"] >= table["capacity"]).all()


def test_distance_sweep_with_protocol_token():
    cfg = SweepConfig(spec="bb84-1ph", start=0.0, stop=100.0, points=3, distance_mode=True, series=["capacity"])
    table = run_sweep(cfg)
    assert list(table.columns) == ["x", "capacity", "bb84-1ph"]
    assert table["x"].tolist() == [0.0, 50.0, 100.0]
    assert table["capacity"][0] == math.inf
    assert table["capacity"][1] == pytest.approx(-math.log2(0.9))
    assert table["bb84-1ph"][1] == pytest.approx(0.05)


def test_damping_sweep():
    cfg = SweepConfig(spec="damping", start=0.0, stop=1.0, points=3, series=["squashed", "ree", "half-assisted"])
    table = run_sweep(cfg)
    assert table["squashed"][0] == pytest.approx(1.0)
    assert table["ree"][1] == pytest.approx(1.0)
    assert table["half-assisted"][0] == pytest.approx(1.0, abs=1e-8)


def test_constrained_series_need_mean_photon_number():
    with pytest.raises(DomainError):
        run_sweep(SweepConfig(spec="lossy", start=0.1, stop=0.5, points=2, series=["constrained-rci"]))
    table = run_sweep(
        SweepConfig(spec="lossy", start=0.1, stop=0.5, points=2, series=["constrained-tgw"], mbar=1.0)
    )
    assert (table["constrained-tgw"] > 0.0).all()


def test_series_must_match_family():
    with pytest.raises(UnsupportedChannelError):
        run_sweep(SweepConfig(spec="damping", start=0.1, stop=0.5, points=2, series=["tgw"]))


def test_unknown_series_reports_position():
    with pytest.raises(ParseError) as excinfo:
        run_sweep(SweepConfig(spec="lossy", start=0.1, stop=0.5, points=2, series=["capacity", "nope"]))
    assert excinfo.value.position == 9


def test_point_spec_and_axis():
    assert _point_spec("lossy", "eta", 0.5) == "lossy:eta=0.5"
    assert _point_spec("thermal-loss:nbar=1", "eta", 0.25) == "thermal-loss:nbar=1,eta=0.25"
    assert _axis_for("lossy", None) == "eta"
    assert _axis_for("amplifier:nbar=1", None) == "g"
    assert _axis_for("damping", "p") == "p"
    with pytest.raises(DomainError):
        _axis_for("form-b1", None)


def test_csv_rendering():
    table = pd.DataFrame({"x": [0.5, 0.25], "lower": [1.0, math.nan]})
    assert render_table(table, "csv") == "x,lower\n0.5,1\n0.25,\n"


def test_json_rendering():
    table = pd.DataFrame({"x": [0.0], "capacity": [math.inf], "lower": [math.nan]})
    records = json.loads(render_table(table, "json"))
    assert records == [{"x": 0.0, "capacity": "Infinity", "lower": None}]


def test_write_table(tmp_path):
    out = tmp_path / "table.csv"
    table = pd.DataFrame({"x": [1.0], "upper": [2.0]})
    write_table(table, "csv", str(out))
    assert out.read_text(encoding="utf-8") == "x,upper\n1,2\n"
