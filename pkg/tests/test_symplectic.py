import numpy as np
import pytest

from twoway.core.errors import NotSymmetricError, SingularSpectrumError, UncertaintyViolationError
from twoway.models.symplectic import (
    cm_from_gibbs,
    gibbs_matrix,
    is_singular,
    partial_transpose_cm,
    random_cm,
    random_symplectic,
    symplectic_eigenvalues,
    symplectic_form,
    symplectic_inverse,
    thermal_cm,
    tmsv_cm,
    two_mode_cm,
    vacuum_cm,
    validate_cm,
    williamson,
)


def test_thermal_spectrum():
    assert validate_cm(thermal_cm(1.0)).eigenvalues == pytest.approx([1.5])
    assert validate_cm(thermal_cm(1.0)).thermal_numbers == pytest.approx([1.0])


def test_tmsv_is_pure():
    nu = validate_cm(tmsv_cm(3.0)).eigenvalues
    assert nu == pytest.approx([0.5, 0.5], abs=1e-10)
    assert is_singular(tmsv_cm(3.0))
    assert not is_singular(thermal_cm(0.2))


def test_spectrum_sorted_descending():
    nu = symplectic_eigenvalues(two_mode_cm(2.0, 1.0, 0.0))
    assert nu == pytest.approx([2.0, 1.0])


def test_asymmetric_matrix_rejected():
    V = np.array([[1.0, 0.3], [0.0, 1.0]])
    with pytest.raises(NotSymmetricError):
        validate_cm(V)


def test_uncertainty_violation_rejected():
    with pytest.raises(UncertaintyViolationError):
        validate_cm(0.4 * np.eye(2))


def test_partial_transpose_detects_entanglement():
    mu = 2.0
    nu_pt = symplectic_eigenvalues(partial_transpose_cm(tmsv_cm(mu)))
    assert nu_pt[-1] == pytest.approx(mu - np.sqrt(mu * mu - 0.25))
    assert nu_pt[-1] < 0.5


def test_random_symplectic_preserves_form():
    omega = symplectic_form(3)
    S = random_symplectic(3, seed=7)
    assert np.allclose(S @ omega @ S.T, omega, atol=1e-12)
    assert np.allclose(symplectic_inverse(S) @ S, np.eye(6), atol=1e-10)


def test_random_symplectic_without_seed_is_identity():
    assert np.array_equal(random_symplectic(2), np.eye(4))


@pytest.mark.parametrize("n,seed", [(1, 3), (2, 11), (3, 5)])
def test_williamson_reconstructs(n, seed):
    V = random_cm(n, seed).entries
    nu, S = williamson(V)
    omega = symplectic_form(n)
    assert np.allclose(S @ omega @ S.T, omega, atol=1e-9)
    assert np.allclose(S @ np.diag(np.concatenate([nu, nu])) @ S.T, V, atol=1e-9)
    assert np.sort(nu)[::-1] == pytest.approx(symplectic_eigenvalues(V), rel=1e-9)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_gibbs_roundtrip(seed):
    V = random_cm(2, seed).entries
    assert np.allclose(cm_from_gibbs(gibbs_matrix(V)).entries, V, atol=1e-9)


def test_gibbs_of_thermal_mode():
    nbar = 2.0
    G = gibbs_matrix(thermal_cm(nbar)).entries
    assert np.allclose(G, np.log((nbar + 1.0) / nbar) * np.eye(2))


def test_gibbs_diverges_on_pure_state():
    with pytest.raises(SingularSpectrumError):
        gibbs_matrix(vacuum_cm(1))


@pytest.mark.parametrize("n,seed", [(1, 31), (2, 32), (3, 33)])
def test_spectrum_is_symplectic_invariant(n, seed):
    V = random_cm(n, seed).entries
    S = random_symplectic(n, seed=seed + 1)
    before = validate_cm(V).eigenvalues
    after = validate_cm(S @ V @ S.T).eigenvalues
    assert after == pytest.approx(before, rel=1e-9)


def test_gibbs_vanishes_at_high_temperature():
    norms = [np.linalg.norm(gibbs_matrix(thermal_cm(nbar)).entries) for nbar in (1.0, 1e2, 1e4, 1e6)]
    assert norms == sorted(norms, reverse=True)
    assert norms[-1] < 2e-6
