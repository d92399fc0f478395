import logging
import math
import pytest

from twoway.core.errors import DomainError, OutOfRangeError, ParseError
from twoway.models.composition import (
    ChannelEnsemble,
    fading_bound,
    fading_report,
    fiber,
    km_to_eta,
    multiband,
    parse_bands,
    parse_ensemble,
    two_way_pair,
)
from twoway.models.bounds import entanglement_flux
from twoway.schemas.channel import AmplitudeDamping, Erasure, FormB1, ThermalLoss, lossy, qubit_dephasing


def test_fading_bound_averages_flux():
    ensemble = ChannelEnsemble(members=((0.5, lossy(0.5)), (0.5, lossy(0.75))))
    assert fading_bound(ensemble) == pytest.approx(1.5)


def test_fading_skips_members_with_zero_weight():
    ensemble = ChannelEnsemble(members=((1.0, lossy(0.5)), (0.0, FormB1())))
    assert fading_bound(ensemble) == pytest.approx(1.0)


def test_fading_diverges_on_unbounded_member(caplog):
    ensemble = ChannelEnsemble(members=((0.9, lossy(0.5)), (0.1, FormB1())))
    with caplog.at_level(logging.WARNING):
        assert fading_bound(ensemble) == math.inf
    assert "infinite flux" in caplog.text


def test_fading_report_has_no_lower_bound():
    report = fading_report(ChannelEnsemble(members=((0.5, lossy(0.5)), (0.5, lossy(0.75)))))
    assert report.lower is None
    assert report.lower_name == "not-computed"
    assert not report.exact
    assert report.upper == pytest.approx(1.5)


def test_fading_over_entanglement_breaking_members_is_zero():
    report = fading_report(ChannelEnsemble(members=((1.0, ThermalLoss(eta=0.5, nbar=3.0)),)))
    assert report.exact
    assert report.capacity == 0.0


def test_ensemble_weights_validated():
    with pytest.raises(ValueError):
        ChannelEnsemble(members=((0.5, lossy(0.5)), (0.6, lossy(0.75))))
    with pytest.raises(ValueError):
        ChannelEnsemble(members=())


def test_pair_of_distillable_channels_is_exact():
    report = two_way_pair(lossy(0.5), lossy(0.75))
    assert report.exact
    assert report.capacity == pytest.approx(2.0)


def test_pair_takes_the_better_direction():
    report = two_way_pair(AmplitudeDamping(p=0.5), lossy(0.5))
    assert not report.exact
    assert report.upper == pytest.approx(1.0)
    assert report.lower == pytest.approx(1.0)


def test_multiband_adds_bounds():
    report = multiband([lossy(0.5), lossy(0.75)])
    assert report.exact
    assert report.capacity == pytest.approx(3.0)
    assert report.upper_name == "sum(entanglement-flux)"


def test_multiband_keeps_sandwich():
    report = multiband([lossy(0.5), ThermalLoss(eta=0.5, nbar=0.5)])
    assert not report.exact
    assert report.lower == pytest.approx(1.0)
    assert report.upper > report.lower
    assert report.clamped


def test_multiband_needs_a_band():
    with pytest.raises(DomainError):
        multiband([])


def test_fiber_scales_with_modes():
    assert fiber(3, 0.5).capacity == pytest.approx(3.0)
    with pytest.raises(OutOfRangeError):
        fiber(0, 0.5)


def test_km_to_eta():
    assert km_to_eta(0.0) == 1.0
    assert km_to_eta(50.0) == pytest.approx(0.1)
    assert km_to_eta(10.0, db_per_km=3.0) == pytest.approx(1e-3)
    with pytest.raises(OutOfRangeError):
        km_to_eta(-1.0)


def test_parse_bands():
    bands = parse_bands("lossy:eta=0.5;damping:p=0.2")
    assert len(bands) == 2
    assert isinstance(bands[1], AmplitudeDamping)


@pytest.mark.parametrize(
    "text,position",
    [
        ("lossy:eta=0.5;lossy:eta=x", 24),
        ("lossy:eta=0.5;", 14),
        ("lossy:eta=0.5;warp:eta=0.1", 14),
    ],
)
def test_parse_bands_reports_offsets(text, position):
    with pytest.raises(ParseError) as excinfo:
        parse_bands(text)
    assert excinfo.value.position == position


def test_parse_weighted_ensemble():
    ensemble = parse_ensemble("0.25@lossy:eta=0.5;0.75@lossy:eta=0.9")
    assert [w for w, _ in ensemble.members] == [0.25, 0.75]


def test_parse_unweighted_ensemble_is_uniform():
    ensemble = parse_ensemble("lossy:eta=0.5;lossy:eta=0.9")
    assert [w for w, _ in ensemble.members] == [0.5, 0.5]


def test_parse_ensemble_errors():
    with pytest.raises(ParseError):
        parse_ensemble("0.5@lossy:eta=0.5;lossy:eta=0.9")
    with pytest.raises(ParseError) as excinfo:
        parse_ensemble("x@lossy:eta=0.5")
    assert excinfo.value.position == 0
    with pytest.raises(ParseError) as excinfo:
        parse_ensemble("0.5@lossy:eta=abc")
    assert excinfo.value.position == 14
    with pytest.raises(DomainError):
        parse_ensemble("0.5@lossy:eta=0.5;0.7@lossy:eta=0.9")


@pytest.mark.parametrize(
    "first,second",
    [
        (lossy(0.5), lossy(0.75)),
        (AmplitudeDamping(p=0.5), lossy(0.5)),
        (ThermalLoss(eta=0.8, nbar=0.5), Erasure(d=2, p=0.3)),
        (qubit_dephasing(0.0), lossy(0.5)),
    ],
)
def test_pair_is_symmetric(first, second):
    assert two_way_pair(first, second) == two_way_pair(second, first)


def test_pair_tie_labels_do_not_depend_on_order():
    # both directions give one ebit per use
    forward = two_way_pair(qubit_dephasing(0.0), lossy(0.5))
    backward = two_way_pair(lossy(0.5), qubit_dephasing(0.0))
    assert forward.lower_name == backward.lower_name
    assert forward.upper_name == backward.upper_name


@pytest.mark.parametrize(
    "members",
    [
        ((0.5, 0.2), (0.5, 0.9)),
        ((0.1, 0.05), (0.3, 0.5), (0.6, 0.95)),
        ((0.25, 0.4), (0.25, 0.45), (0.5, 0.6)),
    ],
)
def test_fading_bound_is_at_least_flux_of_mean_transmissivity(members):
    ensemble = ChannelEnsemble(members=tuple((w, lossy(eta)) for w, eta in members))
    mean_eta = sum(w * eta for w, eta in members)
    assert fading_bound(ensemble) >= entanglement_flux(lossy(mean_eta))
