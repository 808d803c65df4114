"""Simulated balanced-detection data and phase-space reconstruction.

Covers homodyne-style sampling of generalized quadratures, the G_N moment
inversion, Gram-Charlier expansions of any order, the Radon pair, and
dominant-mode extraction from a measured covariance series.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import hermite as H
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.ndimage import map_coordinates
from scipy.special import comb

from .detection import GatingFunction, gate_normalization
from .errors import (
    DuplicatePhases,
    InsufficientPhases,
    NegativeMarginal,
    NoSqueezingDetected,
    TooFewPhases,
)
from .phasespace import GaussianState, WignerGrid, default_xp_axis


@dataclass(frozen=True)
class QuadratureSampleSet:
    phase: float
    t_d: float
    samples: np.ndarray
    seed: int


@dataclass(frozen=True)
class MomentSet:
    """Symmetrized moments ``moments[(n, m)] = <X^n P^m>_S`` for n + m <= order."""

    order: int
    moments: Dict[Tuple[int, int], float]

    def __getitem__(self, key):
        return self.moments[key]


@dataclass(frozen=True)
class MarginalSet:
    phases: np.ndarray
    q: np.ndarray
    pr: np.ndarray


@dataclass(frozen=True)
class GCCoefficients:
    order: int
    C: Dict[Tuple[int, int], float]


@dataclass(frozen=True)
class ExtractedMode:
    t: np.ndarray
    alpha: np.ndarray
    theta: np.ndarray
    r: float
    r_series: np.ndarray


def rng_for(seed: int, phase_index: int = 0, delay_index: int = 0) -> np.random.Generator:
    """Independent stream per (seed, phase, delay) triple."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(phase_index), int(delay_index)]))


# ------------------------------------------------------------------ sampling


def marginal_on_axis(W: WignerGrid, phase: float, q=None) -> Tuple[np.ndarray, np.ndarray]:
    """pr_phi(q) by line integrals of W perpendicular to the phase axis."""
    q = W.x if q is None else np.asarray(q, float)
    s = q
    c, sn = np.cos(phase), np.sin(phase)
    Q, S = np.meshgrid(q, s, indexing="ij")
    xs = Q * c - S * sn
    ps = Q * sn + S * c
    ix = (xs - W.x[0]) / W.dx
    ip = (ps - W.p[0]) / W.dp
    vals = map_coordinates(W.values, [ix, ip], order=3, mode="constant", cval=0.0)
    return q, trapezoid(vals, s, axis=1)


def sample_quadratures(
    state: Union[GaussianState, WignerGrid],
    phase: float,
    t_d: float,
    n: int,
    seed: int,
    phase_index: int = 0,
    delay_index: int = 0,
) -> QuadratureSampleSet:
    rng = rng_for(seed, phase_index, delay_index)
    if isinstance(state, GaussianState):
        var = float(state.quadrature_variance(phase))
        mu = state.mean[0] * np.cos(phase) + state.mean[1] * np.sin(phase)
        samples = rng.normal(mu, np.sqrt(var), size=n)
    else:
        q, pr = marginal_on_axis(state, phase)
        dq = q[1] - q[0]
        negative = -np.sum(np.clip(pr, None, 0.0)) * dq
        if negative > 1e-4:
            raise NegativeMarginal(f"marginal at phase {phase:.4g} has negative mass {negative:.3g}")
        pr = np.clip(pr, 0.0, None)
        cdf = cumulative_trapezoid(pr, q, initial=0.0)
        cdf /= cdf[-1]
        samples = np.interp(rng.random(n), cdf, q)
    return QuadratureSampleSet(float(phase), float(t_d), samples, int(seed))


# ------------------------------------------------------------------ moments


def default_phases(order: int) -> np.ndarray:
    return np.arange(order + 1) * np.pi / (order + 1)


def _g_rows(n: int, phases) -> np.ndarray:
    """Rows of G_n: <X_phi^n> = sum_k C(n,k) cos^{n-k} sin^k <X^{n-k} P^k>_S."""
    phases = np.asarray(phases, float)
    k = np.arange(n + 1)
    c = np.cos(phases)[:, None]
    s = np.sin(phases)[:, None]
    return comb(n, k)[None, :] * c ** (n - k) * s**k


def moment_matrix(order: int, phases) -> Tuple[np.ndarray, np.ndarray, float]:
    """G_N for N+1 distinct phases in [0, pi), its inverse and the condition number."""
    phases = np.asarray(phases, float)
    if phases.size != order + 1:
        raise InsufficientPhases(f"order {order} needs exactly {order + 1} phases, got {phases.size}")
    wrapped = np.mod(phases, np.pi)
    diffs = np.abs(wrapped[:, None] - wrapped[None, :])
    diffs = np.minimum(diffs, np.pi - diffs)
    if np.any(diffs[~np.eye(phases.size, dtype=bool)] < 1e-12):
        raise DuplicatePhases("phases must be pairwise distinct modulo pi")
    G = _g_rows(order, phases)
    Ginv = np.linalg.inv(G)
    cond = float(np.linalg.cond(G))
    if cond > 1e3:
        warnings.warn(f"G_{order} is ill-conditioned (condition number {cond:.3g})", RuntimeWarning)
    return G, Ginv, cond


def moments_from_phase_moments(raw: np.ndarray, phases, order: int) -> MomentSet:
    """``raw[k, n-1] = <X_{phi_k}^n>`` for n = 1..order -> symmetrized moments.

    Each order n uses all supplied phases in a least-squares solve of the
    (possibly over-determined) binomial system.
    """
    phases = np.asarray(phases, float)
    if phases.size < order + 1:
        raise InsufficientPhases(f"order {order} needs at least {order + 1} phases")
    out = {(0, 0): 1.0}
    for n in range(1, order + 1):
        G = _g_rows(n, phases)
        sol = np.linalg.lstsq(G, raw[:, n - 1], rcond=None)[0]
        for k in range(n + 1):
            out[(n - k, k)] = float(sol[k])
    return MomentSet(order, out)


def estimate_moments(sample_sets: Sequence[QuadratureSampleSet], order: int) -> MomentSet:
    if len(sample_sets) < order + 1:
        raise InsufficientPhases(f"order {order} needs {order + 1} phases, got {len(sample_sets)}")
    if len({round(s.t_d, 12) for s in sample_sets}) != 1:
        raise ValueError("all sample sets must share the same delay")
    phases = np.array([s.phase for s in sample_sets])
    moment_matrix(order, phases[: order + 1])  # distinctness and conditioning checks
    raw = np.array([[np.mean(s.samples**n) for n in range(1, order + 1)] for s in sample_sets])
    return moments_from_phase_moments(raw, phases, order)


def gaussian_moments(state: GaussianState, order: int) -> MomentSet:
    """Exact symmetrized moments of a zero-mean Gaussian via its rotated marginals."""
    phases = default_phases(order)
    sig = np.sqrt(state.quadrature_variance(phases))
    raw = np.zeros((phases.size, order))
    for n in range(1, order + 1):
        raw[:, n - 1] = 0.0 if n % 2 else sig**n * _double_factorial(n - 1)
    return moments_from_phase_moments(raw, phases, order)


def _double_factorial(k: int) -> float:
    return float(np.prod(np.arange(k, 0, -2))) if k > 0 else 1.0


def wigner_moments(W: WignerGrid, order: int) -> MomentSet:
    """Symmetrized moments as phase-space averages of x^n p^m."""
    X, P = np.meshgrid(W.x, W.p, indexing="ij")
    dA = W.dx * W.dp
    out = {}
    for n in range(order + 1):
        for m in range(order + 1 - n):
            out[(n, m)] = float(np.sum(X**n * P**m * W.values) * dA)
    return MomentSet(order, out)


# ------------------------------------------------------------------ Gram-Charlier


def _hermite_poly(n: int) -> np.ndarray:
    """Power-basis coefficients of the physicists' Hermite polynomial H_n."""
    return H.herm2poly(np.eye(n + 1)[n])


def gc_coefficients(moments: MomentSet) -> GCCoefficients:
    """C_nm = <H_n(X) H_m(P)>_S / (2^{n+m} n! m!) for n + m <= order."""
    N = moments.order
    polys = [_hermite_poly(n) for n in range(N + 1)]
    C = {}
    for n in range(N + 1):
        for m in range(N + 1 - n):
            acc = 0.0
            for k, hk in enumerate(polys[n]):
                if hk == 0:
                    continue
                for l, hl in enumerate(polys[m]):
                    if hl != 0:
                        acc += hk * hl * moments[(k, l)]
            C[(n, m)] = acc / (2 ** (n + m) * math.factorial(n) * math.factorial(m))
    return GCCoefficients(N, C)


def gram_charlier(moments: MomentSet, x=None, p=None) -> WignerGrid:
    if moments.order < 2:
        raise ValueError("Gram-Charlier reconstruction needs order >= 2")
    x = default_xp_axis() if x is None else np.asarray(x, float)
    p = x if p is None else np.asarray(p, float)
    coeffs = gc_coefficients(moments).C
    N = moments.order
    Hx = [H.hermval(x, np.eye(n + 1)[n]) for n in range(N + 1)]
    Hp = [H.hermval(p, np.eye(n + 1)[n]) for n in range(N + 1)]
    acc = np.zeros((x.size, p.size))
    for (n, m), c in coeffs.items():
        acc += c * np.outer(Hx[n], Hp[m])
    w_vac = np.outer(np.exp(-(x**2)), np.exp(-(p**2))) / np.pi
    return WignerGrid(x, p, acc * w_vac)


# ------------------------------------------------------------------ Radon pair


def marginals_from_wigner(W: WignerGrid, phases, q=None) -> MarginalSet:
    phases = np.asarray(phases, float)
    rows = []
    for ph in phases:
        q_axis, pr = marginal_on_axis(W, ph, q)
        rows.append(pr)
    return MarginalSet(phases, q_axis, np.array(rows))


def inverse_radon(marginals: MarginalSet, x=None, p=None, cutoff_fraction: float = 0.8) -> WignerGrid:
    """Filtered back-projection with a hard ramp-filter cutoff at a fraction of Nyquist."""
    phases = np.mod(np.asarray(marginals.phases, float), np.pi)
    if phases.size < 16:
        raise TooFewPhases(f"inverse Radon needs at least 16 phases, got {phases.size}")
    order = np.argsort(phases)
    phases = phases[order]
    pr = marginals.pr[order]
    gaps = np.diff(np.concatenate([phases, [phases[0] + np.pi]]))
    if gaps.max() > 4 * np.pi / phases.size:
        raise TooFewPhases("phases do not cover [0, pi) evenly enough for back-projection")
    # Trapezoid weights on the circle of period pi.
    dphi = 0.5 * (gaps + np.roll(gaps, 1))

    x = default_xp_axis() if x is None else np.asarray(x, float)
    p = x if p is None else np.asarray(p, float)
    q = marginals.q
    dq = q[1] - q[0]
    L = 1 << int(np.ceil(np.log2(4 * q.size)))
    xi = 2 * np.pi * np.fft.fftfreq(L, dq)
    ramp = np.abs(xi) * (np.abs(xi) <= cutoff_fraction * np.pi / dq)
    filtered = np.real(np.fft.ifft(np.fft.fft(pr, L, axis=1) * ramp, axis=1))[:, : q.size] / (2 * np.pi)

    X, P = np.meshgrid(x, p, indexing="ij")
    out = np.zeros_like(X)
    for k, ph in enumerate(phases):
        proj = X * np.cos(ph) + P * np.sin(ph)
        out += dphi[k] * np.interp(proj, q, filtered[k], left=0.0, right=0.0)
    W = WignerGrid(x, p, out)
    return WignerGrid(x, p, out / W.normalization())


# ------------------------------------------------------------------ mode extraction


def ellipse_theta(cov: np.ndarray):
    """Per-delay |theta|^2, polar angle and r from the covariance eigenvalues."""
    ev, evec = np.linalg.eigh(cov)
    vmin, vmax = ev[..., 0], ev[..., 1]
    angle = np.arctan2(evec[..., 1, 1], evec[..., 0, 1])
    num = (2 * vmax - 1) * (1 - 2 * vmin)
    den = 4 * (vmax + vmin - 1)
    valid = (vmax > 0.5) & (vmin < 0.5) & (np.abs(den) > 1e-300)
    t2 = np.where(valid, num / np.where(valid, den, 1.0), 0.0)
    t2 = np.clip(t2, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(valid, 0.5 * np.log((2 * vmax - 1) / (1 - 2 * vmin)), 0.0)
    return t2, angle, r, vmax, vmin


def extract_mode(
    cov_series: np.ndarray,
    t_d: np.ndarray,
    gate: GatingFunction,
    eps: float = 1e-3,
    tol: float = 1e-9,
) -> ExtractedMode:
    """Recover theta(t_d), r and the field mode alpha(t) of a single dominant mode."""
    cov_series = np.asarray(cov_series, float)
    t_d = np.asarray(t_d, float)
    t2, angle, r_series, vmax, vmin = ellipse_theta(cov_series)
    if not np.any(vmax > 0.5 + tol):
        raise NoSqueezingDetected("no delay shows a variance above vacuum")
    # Eigenvector angles are defined modulo pi; unwrap on the doubled angle.
    phase = 0.5 * np.unwrap(2 * angle)
    theta = np.sqrt(t2) * np.exp(1j * phase)

    mask = t2 > 0.1 * t2.max()
    r = float(np.median(r_series[mask]))

    dt = t_d[1] - t_d[0]
    L = 1 << int(np.ceil(np.log2(4 * t_d.size)))
    omega = 2 * np.pi * np.fft.fftfreq(L, dt)
    Rw = gate.spectrum(omega)
    N = gate_normalization(gate)
    spec = np.fft.fft(theta, L)
    a_spec = spec * Rw / (Rw**2 + eps * Rw.max() ** 2) / (-1j * np.sqrt(2) * N)
    alpha = np.fft.ifft(a_spec)[: t_d.size]
    return ExtractedMode(t=t_d, alpha=alpha, theta=theta, r=r, r_series=r_series)


def forward_theta(alpha: np.ndarray, t: np.ndarray, gate: GatingFunction) -> np.ndarray:
    """theta(t_d) = -i sqrt(2) N int R(t - t_d) alpha(t) dt on the sampling grid of ``t``."""
    dt = t[1] - t[0]
    L = 1 << int(np.ceil(np.log2(4 * t.size)))
    omega = 2 * np.pi * np.fft.fftfreq(L, dt)
    N = gate_normalization(gate)
    spec = np.fft.fft(alpha, L) * gate.spectrum(omega)
    return -1j * np.sqrt(2) * N * np.fft.ifft(spec)[: t.size]
