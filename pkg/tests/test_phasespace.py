import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from subcycle.detection import GatingFunction, project_modes
from subcycle.errors import DegenerateSubtraction, GridMismatch, GridTruncation
from subcycle.phasespace import (
    CharFnGrid,
    GaussianState,
    WignerGrid,
    charfn_psq,
    charfn_sub,
    covariance_series,
    fock_wigner,
    gaussian_trwf,
    gaussian_wigner,
    hs_distance,
    photon_probabilities,
    single_mode_sub_charfn,
    subtracted_state,
    subtracted_wigner,
    vacuum_wigner,
    wigner_from_charfn,
    wigner_origin,
)

DIM = 40


def _fock_ops(dim):
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    X = (a + a.T) / np.sqrt(2)
    P = (a - a.T) / (1j * np.sqrt(2))
    return a, X, P


@pytest.fixture(scope="module")
def squeezed_photon():
    """S|1> with x anti-squeezed, built in a 40-level truncated Fock space."""
    r = 0.3
    big = 160
    a, _, _ = _fock_ops(big)
    # exp(r/2 (a+^2 - a^2)) stretches x by e^r.
    S = expm(0.5 * r * (a.T @ a.T - a @ a))
    one = np.zeros(big)
    one[1] = 1.0
    psi = S @ one
    assert np.sum(np.abs(psi[DIM:]) ** 2) < 1e-20
    state = np.zeros(big, complex)
    state[:DIM] = psi[:DIM]
    return r, state / np.linalg.norm(state)


def test_subtracted_charfn_vs_fock_oracle(squeezed_photon):
    r, psi = squeezed_photon
    _, X, P = _fock_ops(psi.size)
    worst = 0.0
    for u, v in [(0.0, 0.0), (0.7, -0.3), (-1.5, 0.4), (0.2, 2.1), (2.5, 2.5), (-3.0, 1.0)]:
        D = expm(-1j * (u * X + v * P))
        exact = psi.conj() @ D @ psi
        worst = max(worst, abs(single_mode_sub_charfn(r, u, v) - exact))
    assert worst < 1e-6


def test_subtracted_charfn_requires_squeezing():
    with pytest.raises(DegenerateSubtraction):
        single_mode_sub_charfn(0.0, 1.0, 1.0)
    with pytest.raises(DegenerateSubtraction):
        subtracted_state([0.0, 0.0])


@given(st.floats(0.01, 2.0), st.floats(-5, 5), st.floats(-5, 5))
def test_subtracted_charfn_symmetry(r, u, v):
    val = single_mode_sub_charfn(r, u, v)
    assert abs(val.imag) == 0.0
    assert abs(val) <= 1.0 + 1e-12
    assert val == pytest.approx(single_mode_sub_charfn(r, -u, -v))


def test_charfn_routes_agree_for_gaussian(modes5):
    proj = project_modes(modes5, GatingFunction(5.8), [-14.1, -8.4, 0.0])
    for i in range(3):
        W_cf = wigner_from_charfn(charfn_psq(proj, modes5.r, i))
        W_direct = gaussian_wigner(gaussian_trwf(proj, modes5.r, i))
        assert np.abs(W_cf.values - W_direct.values).max() < 1e-8


def test_wigner_normalization_and_origin(modes5):
    proj = project_modes(modes5, GatingFunction(5.8), [-13.8])
    sub = subtracted_state(modes5.r)
    cf = charfn_sub(sub, proj, 0)
    W = wigner_from_charfn(cf)
    assert W.normalization() == pytest.approx(1.0, abs=1e-4)
    assert cf.values[128, 128] == pytest.approx(1.0)
    assert wigner_origin(cf) == pytest.approx(W.value_at_origin(), abs=1e-8)


def test_vacuum_values():
    W = vacuum_wigner()
    assert W.value_at_origin() == pytest.approx(1 / np.pi)
    assert W.normalization() == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(photon_probabilities(W, 2), [1.0, 0.0, 0.0], atol=1e-9)


def test_fock_wigner_probabilities():
    x = np.linspace(-6, 6, 241)
    X, P = np.meshgrid(x, x, indexing="ij")
    W = WignerGrid(x, x, fock_wigner(1, X, P))
    assert W.value_at_origin() == pytest.approx(-1 / np.pi)
    np.testing.assert_allclose(photon_probabilities(W, 3), [0, 1, 0, 0], atol=1e-8)
    with pytest.raises(ValueError):
        fock_wigner(-1, X, P)


def test_truncated_charfn_grid_rejected(modes5):
    proj = project_modes(modes5, GatingFunction(5.8), [0.0])
    u = np.linspace(-1.0, 1.0, 41)
    with pytest.raises(GridTruncation):
        wigner_from_charfn(charfn_psq(proj, modes5.r, 0, u, u))


def test_hs_distance_properties():
    W = vacuum_wigner()
    assert hs_distance(W, W) == 0.0
    squeezed = gaussian_wigner(GaussianState(np.diag([0.5 * np.e, 0.5 / np.e])))
    assert hs_distance(W, squeezed) == pytest.approx(hs_distance(squeezed, W))
    with pytest.raises(GridMismatch):
        hs_distance(W, vacuum_wigner(np.linspace(-5, 5, 101)))


def test_hs_distance_between_gaussians_closed_form():
    # 2 pi int (W1 - W2)^2 = 1/(2 sqrt det S1) + 1/(2 sqrt det S2) - 2 / sqrt det(S1 + S2)
    S1 = np.diag([0.5, 0.5])
    S2 = np.array([[0.9, 0.2], [0.2, 0.4]])
    d = hs_distance(gaussian_wigner(GaussianState(S1)), gaussian_wigner(GaussianState(S2)))
    expected = 0.5 / np.sqrt(np.linalg.det(S1)) + 0.5 / np.sqrt(np.linalg.det(S2)) - 2 / np.sqrt(
        np.linalg.det(S1 + S2)
    )
    assert d == pytest.approx(expected, rel=1e-8)


@given(st.lists(st.floats(-50.0, 20.0), min_size=1, max_size=8))
@settings(max_examples=40, deadline=None)
def test_uncertainty_relation(modes5, delays):
    covs = covariance_series(project_modes(modes5, GatingFunction(5.8), delays), modes5.r)
    assert np.all(np.linalg.det(covs) >= 0.25 - 1e-6)


def test_subtracted_state_weights(modes5):
    sub = subtracted_state(modes5.r)
    assert sub.weights.sum() == pytest.approx(1.0)
    assert sub.n_photons == pytest.approx(modes5.mean_photon_number)


def test_subtracted_state_is_nonclassical_somewhere():
    from subcycle.physgrid import DrivingPulse
    from subcycle.squeezing import squeezing_modes

    modes = squeezing_modes(DrivingPulse(16.0, 5.0))
    proj = project_modes(modes, GatingFunction(24.5), [-7.5])
    W = subtracted_wigner(subtracted_state(modes.r), proj, 0)
    assert W.value_at_origin() < -0.2


def test_gaussian_state_validation():
    with pytest.raises(ValueError):
        GaussianState(np.array([[1.0, 0.3], [0.0, 1.0]]))
    g = GaussianState(np.diag([1.0, 0.25]))
    assert g.quadrature_variance(np.pi / 2) == pytest.approx(0.25)


def test_charfn_grid_shape():
    cf = CharFnGrid(np.zeros(3), np.zeros(4), np.zeros((3, 4)))
    assert cf.values.shape == (3, 4)
