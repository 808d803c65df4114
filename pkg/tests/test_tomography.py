import warnings
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subcycle.detection import GatingFunction, project_modes
from subcycle.errors import (
    DuplicatePhases,
    InsufficientPhases,
    NegativeMarginal,
    NoSqueezingDetected,
    TooFewPhases,
)
from subcycle.phasespace import (
    GaussianState,
    WignerGrid,
    covariance_series,
    fock_wigner,
    gaussian_wigner,
    hs_distance,
    vacuum_wigner,
)
from subcycle.physgrid import TimeGrid
from subcycle.squeezing import field_modes, normalized_overlap
from subcycle.tomography import (
    default_phases,
    estimate_moments,
    extract_mode,
    forward_theta,
    gaussian_moments,
    gc_coefficients,
    gram_charlier,
    inverse_radon,
    marginal_on_axis,
    marginals_from_wigner,
    moment_matrix,
    sample_quadratures,
    wigner_moments,
)

SQUEEZED = GaussianState(np.array([[0.9, 0.25], [0.25, 0.45]]))


@given(st.lists(st.floats(0.0, np.pi - 1e-3), min_size=5, max_size=5, unique=True))
@settings(max_examples=100)
def test_moment_matrix_invertible_for_distinct_phases(phases):
    ph = np.array(phases)
    diffs = np.abs(ph[:, None] - ph[None, :])
    diffs = np.minimum(diffs, np.pi - diffs)[~np.eye(5, dtype=bool)]
    if diffs.min() < 1e-3:
        return
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        G, Ginv, cond = moment_matrix(4, ph)
    np.testing.assert_allclose(G @ Ginv, np.eye(5), atol=1e-6 * cond)


def test_moment_matrix_errors():
    with pytest.raises(DuplicatePhases):
        moment_matrix(2, [0.0, 1.0, np.pi])
    with pytest.raises(InsufficientPhases):
        moment_matrix(3, [0.0, 1.0, 2.0])
    with pytest.warns(RuntimeWarning):
        moment_matrix(2, [0.0, 1e-4, 2.0])


def test_equispaced_phases_are_well_conditioned():
    for order in (2, 4, 6):
        _, _, cond = moment_matrix(order, default_phases(order))
        assert cond < 1e3


def test_gaussian_moments_match_grid_moments():
    exact = gaussian_moments(SQUEEZED, 4)
    grid = wigner_moments(gaussian_wigner(SQUEEZED), 4)
    for key in [(2, 0), (1, 1), (0, 2), (4, 0), (2, 2), (1, 3)]:
        assert grid[key] == pytest.approx(exact[key], rel=1e-6, abs=1e-10)
    assert exact[(1, 1)] == pytest.approx(0.25)


def test_gram_charlier_exact_for_vacuum():
    W = vacuum_wigner()
    gc = gram_charlier(gaussian_moments(GaussianState(0.5 * np.eye(2)), 2))
    assert hs_distance(W, gc) < 1e-20
    assert gc_coefficients(gaussian_moments(SQUEEZED, 2)).C[(0, 0)] == pytest.approx(1.0)


def test_gram_charlier_improves_with_order():
    W = gaussian_wigner(SQUEEZED)
    d = [hs_distance(W, gram_charlier(wigner_moments(W, n))) for n in (2, 4, 6)]
    assert d[0] > d[1] > d[2]
    assert gram_charlier(wigner_moments(W, 4)).normalization() == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        gram_charlier(wigner_moments(W, 1))


def test_sampling_is_deterministic_per_index():
    a = sample_quadratures(SQUEEZED, 0.3, -5.0, 1000, seed=7, phase_index=1)
    b = sample_quadratures(SQUEEZED, 0.3, -5.0, 1000, seed=7, phase_index=1)
    c = sample_quadratures(SQUEEZED, 0.3, -5.0, 1000, seed=7, phase_index=2)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)


def test_sampled_moments_recover_covariance():
    phases = default_phases(2)
    sets = [sample_quadratures(SQUEEZED, ph, 0.0, 200_000, 3, k) for k, ph in enumerate(phases)]
    m = estimate_moments(sets, 2)
    assert m[(2, 0)] == pytest.approx(0.9, rel=2e-2)
    assert m[(1, 1)] == pytest.approx(0.25, abs=1e-2)
    assert m[(0, 2)] == pytest.approx(0.45, rel=2e-2)


def test_estimate_moments_rejects_mixed_delays():
    sets = [sample_quadratures(SQUEEZED, ph, float(k), 100, 0, k) for k, ph in enumerate(default_phases(2))]
    with pytest.raises(ValueError):
        estimate_moments(sets, 2)
    with pytest.raises(InsufficientPhases):
        estimate_moments(sets[:2], 2)


def test_monte_carlo_convergence_rate():
    # RMS error of the second moment should drop by ~10x for 100x more samples.
    true = SQUEEZED.quadrature_variance(0.0)

    def rms(n, reps=24):
        errs = [np.mean(sample_quadratures(SQUEEZED, 0.0, 0.0, n, s).samples ** 2) - true for s in range(reps)]
        return np.sqrt(np.mean(np.square(errs)))

    ratio = rms(10_000) / rms(1_000_000)
    assert 5.0 < ratio < 20.0


def test_non_gaussian_sampling_kurtosis():
    x = np.linspace(-6, 6, 241)
    X, P = np.meshgrid(x, x, indexing="ij")
    W = WignerGrid(x, x, fock_wigner(1, X, P))
    s = sample_quadratures(W, 0.4, 0.0, 400_000, 11).samples
    # For |1>: <x^2> = 3/2 and <x^4> = 15/4, so the kurtosis is 5/3.
    assert np.mean(s**2) == pytest.approx(1.5, rel=1e-2)
    assert np.mean(s**4) / np.mean(s**2) ** 2 == pytest.approx(5 / 3, rel=2e-2)


def test_negative_marginal_rejected():
    W = vacuum_wigner()
    bad = WignerGrid(W.x, W.p, -W.values)
    with pytest.raises(NegativeMarginal):
        sample_quadratures(bad, 0.0, 0.0, 10, 0)


def test_marginal_is_normalized():
    q, pr = marginal_on_axis(gaussian_wigner(SQUEEZED), 0.7)
    assert np.sum(pr) * (q[1] - q[0]) == pytest.approx(1.0, abs=1e-6)


def test_radon_round_trip():
    W = gaussian_wigner(SQUEEZED)
    rec = inverse_radon(marginals_from_wigner(W, np.arange(64) * np.pi / 64))
    assert hs_distance(W, rec) < 1e-3


def test_radon_round_trip_non_gaussian():
    x = np.linspace(-6, 6, 241)
    X, P = np.meshgrid(x, x, indexing="ij")
    W = WignerGrid(x, x, fock_wigner(1, X, P))
    rec = inverse_radon(marginals_from_wigner(W, np.arange(64) * np.pi / 64))
    assert hs_distance(W, rec) < 1e-3
    assert rec.value_at_origin() < -0.3


def test_radon_phase_checks():
    W = vacuum_wigner()
    with pytest.raises(TooFewPhases):
        inverse_radon(marginals_from_wigner(W, np.arange(8) * np.pi / 8))
    clustered = np.linspace(0.0, 0.5, 32)
    with pytest.raises(TooFewPhases):
        inverse_radon(marginals_from_wigner(W, clustered))


def test_mode_extraction_weak_squeezing(modes_weak):
    gate = GatingFunction(5.8)
    tg = TimeGrid.from_step(-80.0, 80.0, 0.1)
    top = replace(modes_weak, r=modes_weak.r[:1], psi=modes_weak.psi[:1], phi=modes_weak.phi[:1])
    top = field_modes(top, tg)
    proj = project_modes(top, gate, tg.t)
    ex = extract_mode(covariance_series(proj, top.r), tg.t, gate)
    assert ex.r == pytest.approx(top.r[0], rel=1e-3)
    assert normalized_overlap(np.abs(ex.alpha), np.abs(top.alpha[0])) > 0.99
    assert normalized_overlap(ex.alpha, top.alpha[0]) > 0.99
    # Forward model reproduces the measured theta (up to the global sign ambiguity).
    th = forward_theta(top.alpha[0], tg.t, gate)
    inner = slice(200, -200)
    assert normalized_overlap(th[inner], proj.theta[0][inner]) > 0.999


def test_no_squeezing_detected():
    covs = np.repeat(0.5 * np.eye(2)[None], 50, axis=0)
    with pytest.raises(NoSqueezingDetected):
        extract_mode(covs, np.linspace(-5, 5, 50), GatingFunction(5.8))
