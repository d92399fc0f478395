import math
import numpy as np
import pytest

from twoway.core.errors import NotDVFamilyError, NotGaussianFamilyError, OutOfRangeError, UnsupportedChannelError
from twoway.models.channels import (
    channel_kraus,
    check_channel_stretch,
    closest_separable_cm,
    dv_choi,
    dv_separable_candidate,
    gaussian_choi_cm,
    is_entanglement_breaking,
    pauli_probabilities,
    separability_gap,
)
from twoway.models.symplectic import partial_transpose_cm, symplectic_eigenvalues
from twoway.models.telesim import choi_of, quantum_relative_entropy
from twoway.schemas.channel import (
    AdditiveNoise,
    Amplifier,
    AmplitudeDamping,
    ConjugateAmplifier,
    Dephasing,
    Depolarizing,
    Erasure,
    PauliQudit,
    ThermalLoss,
    lossy,
    qubit_dephasing,
)

DV_CHANNELS = [
    PauliQudit(d=2, probs=(0.7, 0.1, 0.1, 0.1)),
    Depolarizing(d=3, p=0.4),
    Dephasing(d=3, probs=(0.6, 0.3, 0.1)),
    Erasure(d=2, p=0.3),
    Erasure(d=3, p=0.5),
    AmplitudeDamping(p=0.4),
]


def test_quasi_choi_entries():
    q = gaussian_choi_cm(lossy(0.5), mu=2.0)
    assert q.beta == pytest.approx(1.25)
    assert q.gamma == pytest.approx(math.sqrt(1.875))
    V = q.cm.entries
    assert V[0, 1] == pytest.approx(q.gamma)
    assert V[2, 3] == pytest.approx(-q.gamma)


def test_amplifier_quasi_choi():
    q = gaussian_choi_cm(Amplifier(g=2.0, nbar=0.0), mu=1.5)
    assert q.beta == pytest.approx(2.0 * 1.5 + 0.5)
    assert q.gamma == pytest.approx(math.sqrt(2.0 * 2.0))


def test_input_below_vacuum_rejected():
    with pytest.raises(OutOfRangeError):
        gaussian_choi_cm(lossy(0.5), mu=0.3)


def test_non_canonical_forms_have_no_quasi_choi():
    with pytest.raises(UnsupportedChannelError):
        gaussian_choi_cm(ConjugateAmplifier(), mu=2.0)
    with pytest.raises(NotGaussianFamilyError):
        gaussian_choi_cm(Depolarizing(p=0.1), mu=2.0)


@pytest.mark.parametrize(
    "channel,expected",
    [
        (ThermalLoss(eta=0.5, nbar=1.0), True),
        (ThermalLoss(eta=0.5, nbar=0.9), False),
        (lossy(0.3), False),
        (lossy(1.0), False),
        (Amplifier(g=2.0, nbar=1.0), True),
        (Amplifier(g=2.0, nbar=0.5), False),
        (AdditiveNoise(xi=1.0), True),
        (AdditiveNoise(xi=0.4), False),
        (ConjugateAmplifier(), True),
        (Depolarizing(p=1.0), False),
    ],
)
def test_entanglement_breaking_thresholds(channel, expected):
    assert is_entanglement_breaking(channel) is expected


def test_separability_gap_vanishes_at_threshold():
    q = gaussian_choi_cm(ThermalLoss(eta=0.5, nbar=1.0), mu=2.0)
    assert separability_gap(q) == pytest.approx(0.0, abs=1e-12)
    assert separability_gap(gaussian_choi_cm(lossy(0.5), mu=2.0)) < 0.0


def test_closest_separable_sits_on_ppt_boundary():
    q = gaussian_choi_cm(lossy(0.7), mu=5.0)
    closest = closest_separable_cm(q)
    assert not closest.already_separable
    nu_pt = symplectic_eigenvalues(partial_transpose_cm(closest.cm.entries))
    assert nu_pt[-1] == pytest.approx(0.5, abs=1e-9)
    # local variances untouched
    assert closest.cm.entries[0, 0] == pytest.approx(q.mu)
    assert closest.cm.entries[1, 1] == pytest.approx(q.beta)


def test_closest_separable_of_separable_state_is_itself():
    q = gaussian_choi_cm(ThermalLoss(eta=0.3, nbar=2.0), mu=3.0)
    closest = closest_separable_cm(q)
    assert closest.already_separable
    assert np.array_equal(closest.cm.entries, q.cm.entries)


def test_depolarizing_pauli_weights():
    probs = pauli_probabilities(Depolarizing(d=2, p=0.4))
    assert probs == pytest.approx([0.7, 0.1, 0.1, 0.1])
    assert sum(pauli_probabilities(Dephasing(d=3, probs=(0.5, 0.3, 0.2)))) == pytest.approx(1.0)


@pytest.mark.parametrize("channel", DV_CHANNELS, ids=lambda c: c.family)
def test_closed_form_choi_matches_kraus(channel):
    closed = dv_choi(channel)
    from_kraus = choi_of(channel_kraus(channel))
    assert closed.dims == from_kraus.dims
    assert np.allclose(closed.entries, from_kraus.entries, atol=1e-12)


def test_erasure_output_has_flag_dimension():
    ch = channel_kraus(Erasure(d=2, p=0.3))
    assert (ch.dim_in, ch.dim_out) == (2, 3)


def test_kraus_needs_dv_family():
    with pytest.raises(NotDVFamilyError):
        channel_kraus(lossy(0.5))


@pytest.mark.parametrize("p", [0.05, 0.2, 0.45])
def test_dephasing_dequantized_reference(p):
    c = qubit_dephasing(p)
    value = quantum_relative_entropy(dv_choi(c), dv_separable_candidate(c))
    binary = -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)
    assert value == pytest.approx(1.0 - binary, abs=1e-10)


def test_stretch_check_of_pauli_channel():
    report = check_channel_stretch(qubit_dephasing(0.3))
    assert report.covariant
    assert report.passed
    assert report.distance < 1e-10


def test_stretch_check_of_damping_reports_not_covariant():
    report = check_channel_stretch(AmplitudeDamping(p=0.3))
    assert not report.covariant
    assert not report.passed
    assert report.distance is None
