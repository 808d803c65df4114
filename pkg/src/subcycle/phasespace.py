"""Characteristic functions and time-resolved Wigner functions (TRWFs).

Conventions: ``W~(u, v) = tr[rho exp(-i(uX + vP))]`` and
``W(x, p) = (2 pi)^-2 int int W~(u, v) exp(i(ux + vp)) du dv`` with vacuum
variance 1/2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import eval_laguerre

from .detection import DetectionProjection
from .errors import DegenerateSubtraction, GridMismatch, GridTruncation
from .io import write_csv

V_VAC = 0.5


def default_xp_axis():
    return np.linspace(-6.0, 6.0, 241)


def default_uv_axis():
    return np.linspace(-16.0, 16.0, 257)


@dataclass(frozen=True)
class GaussianState:
    cov: np.ndarray
    mean: np.ndarray = None

    def __post_init__(self):
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (2, 2) or not np.allclose(cov, cov.T, atol=1e-12):
            raise ValueError("covariance must be a symmetric 2x2 matrix")
        object.__setattr__(self, "cov", cov)
        if self.mean is None:
            object.__setattr__(self, "mean", np.zeros(2))

    def quadrature_variance(self, phase) -> np.ndarray:
        c, s = np.cos(phase), np.sin(phase)
        S = self.cov
        return c * c * S[0, 0] + 2 * c * s * S[0, 1] + s * s * S[1, 1]


@dataclass(frozen=True)
class WignerGrid:
    x: np.ndarray
    p: np.ndarray
    values: np.ndarray

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def normalization(self) -> float:
        return float(np.sum(self.values) * self.dx * self.dp)

    def value_at_origin(self) -> float:
        i = int(np.argmin(np.abs(self.x)))
        j = int(np.argmin(np.abs(self.p)))
        return float(self.values[i, j])


@dataclass(frozen=True)
class CharFnGrid:
    u: np.ndarray
    v: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class SubtractedState:
    """Mixture rho_sub = sum_j w_j (b_j rho b_j^+ / sinh^2 r_j) with w_j = sinh^2 r_j / N."""

    r: np.ndarray
    weights: np.ndarray
    n_photons: float


def subtracted_state(r) -> SubtractedState:
    r = np.asarray(r, dtype=float)
    n2 = np.sinh(r) ** 2
    total = float(n2.sum())
    if total <= 0:
        raise DegenerateSubtraction("no squeezed photons available to subtract")
    return SubtractedState(r=r, weights=n2 / total, n_photons=total)


# ------------------------------------------------------------------ Gaussian part


def _mode_blocks(theta):
    """O_j = [[Re, -Im], [Im, Re]] for every theta, shape (..., 2, 2)."""
    a, b = np.real(theta), np.imag(theta)
    return np.stack([np.stack([a, -b], -1), np.stack([b, a], -1)], -2)


def covariance_series(proj: DetectionProjection, r) -> np.ndarray:
    """Covariance matrices for every delay of ``proj``; shape (n_td, 2, 2)."""
    r = np.asarray(r, dtype=float)
    n_td = proj.t_d.size
    cov = 0.5 * (proj.theta_vac**2)[:, None, None] * np.eye(2)
    for j in range(proj.m):
        O = _mode_blocks(proj.theta[j])
        S = np.diag([np.exp(2 * r[j]), np.exp(-2 * r[j])])
        cov = cov + 0.5 * O @ S @ np.swapaxes(O, -1, -2)
    return cov.reshape(n_td, 2, 2)


def gaussian_trwf(proj: DetectionProjection, r, t_d_index: int) -> GaussianState:
    theta = proj.theta[:, t_d_index]
    cov = 0.5 * proj.theta_vac[t_d_index] ** 2 * np.eye(2)
    for j, th in enumerate(theta):
        O = _mode_blocks(th)
        cov = cov + 0.5 * O @ np.diag([np.exp(2 * r[j]), np.exp(-2 * r[j])]) @ O.T
    return GaussianState(0.5 * (cov + cov.T))


def gaussian_wigner(state: GaussianState, x=None, p=None) -> WignerGrid:
    x = default_xp_axis() if x is None else np.asarray(x, float)
    p = x if p is None else np.asarray(p, float)
    X, Pm = np.meshgrid(x - state.mean[0], p - state.mean[1], indexing="ij")
    Si = np.linalg.inv(state.cov)
    q = Si[0, 0] * X**2 + 2 * Si[0, 1] * X * Pm + Si[1, 1] * Pm**2
    vals = np.exp(-0.5 * q) / (2 * np.pi * np.sqrt(np.linalg.det(state.cov)))
    return WignerGrid(x, p, vals)


def _squeezed_factor(r, k1, k2):
    return np.exp(-(np.exp(2 * r) * k1**2 + np.exp(-2 * r) * k2**2) / 4.0)


def _rotated_args(theta, U, V):
    """O^T [u, v] for O built from theta."""
    a, b = theta.real, theta.imag
    return a * U + b * V, -b * U + a * V


def charfn_psq(proj: DetectionProjection, r, t_d_index: int, u=None, v=None) -> CharFnGrid:
    u = default_uv_axis() if u is None else np.asarray(u, float)
    v = u if v is None else np.asarray(v, float)
    U, V = np.meshgrid(u, v, indexing="ij")
    tv = proj.theta_vac[t_d_index]
    out = np.exp(-(tv**2) * (U**2 + V**2) / 4.0)
    for j in range(proj.m):
        out = out * _squeezed_factor(r[j], *_rotated_args(proj.theta[j, t_d_index], U, V))
    return CharFnGrid(u, v, out.astype(complex))


def single_mode_sub_charfn(r, u, v):
    """Characteristic function of b rho b^+ / sinh^2 r for squeezed vacuum (x anti-squeezed).

    This is a squeezed one-photon state: (1 - s/2) exp(-s/4) with
    s = (e^r u)^2 + (e^-r v)^2.
    """
    if r <= 0:
        raise DegenerateSubtraction("r must be positive to subtract a photon")
    s = (np.exp(r) * np.asarray(u)) ** 2 + (np.exp(-r) * np.asarray(v)) ** 2
    return ((1.0 - 0.5 * s) * np.exp(-0.25 * s)).astype(complex)


def charfn_sub(sub: SubtractedState, proj: DetectionProjection, t_d_index: int, u=None, v=None) -> CharFnGrid:
    """Mixture over which mode lost the photon; the others stay squeezed vacua."""
    u = default_uv_axis() if u is None else np.asarray(u, float)
    v = u if v is None else np.asarray(v, float)
    U, V = np.meshgrid(u, v, indexing="ij")
    tv = proj.theta_vac[t_d_index]
    base = np.exp(-(tv**2) * (U**2 + V**2) / 4.0)
    args = [_rotated_args(proj.theta[j, t_d_index], U, V) for j in range(proj.m)]
    sq = [_squeezed_factor(sub.r[j], *args[j]) for j in range(proj.m)]
    total = np.zeros_like(base, dtype=complex)
    for i in range(proj.m):
        if sub.weights[i] == 0:
            continue
        term = sub.weights[i] * single_mode_sub_charfn(sub.r[i], *args[i])
        for j in range(proj.m):
            if j != i:
                term = term * sq[j]
        total += term
    return CharFnGrid(u, v, base * total)


def _dft(axis_out, axis_in):
    d = axis_in[1] - axis_in[0]
    return np.exp(1j * np.outer(axis_out, axis_in)) * d


def wigner_from_charfn(cf: CharFnGrid, x=None, p=None, edge_tol: float = 1e-8) -> WignerGrid:
    """Inverse transform by direct separable DFT between independent axes."""
    x = default_xp_axis() if x is None else np.asarray(x, float)
    p = x if p is None else np.asarray(p, float)
    vals = cf.values
    edge = max(
        np.abs(vals[0]).max(), np.abs(vals[-1]).max(), np.abs(vals[:, 0]).max(), np.abs(vals[:, -1]).max()
    )
    if edge > edge_tol:
        raise GridTruncation(f"characteristic function is {edge:.3g} at the (u, v) grid edge")
    W = _dft(x, cf.u) @ vals @ _dft(p, cf.v).T / (2 * np.pi) ** 2
    return WignerGrid(x, p, np.real(W))


def wigner_origin(cf: CharFnGrid) -> float:
    du = cf.u[1] - cf.u[0]
    dv = cf.v[1] - cf.v[0]
    return float(np.real(np.sum(cf.values)) * du * dv / (2 * np.pi) ** 2)


def fock_wigner(n: int, x, p):
    if n < 0:
        raise ValueError("n must be non-negative")
    rho2 = np.asarray(x) ** 2 + np.asarray(p) ** 2
    return (-1) ** n / np.pi * eval_laguerre(n, 2 * rho2) * np.exp(-rho2)


def photon_probabilities(W: WignerGrid, n_max: int) -> np.ndarray:
    X, P = np.meshgrid(W.x, W.p, indexing="ij")
    dA = W.dx * W.dp
    probs = np.array([2 * np.pi * np.sum(W.values * fock_wigner(n, X, P)) * dA for n in range(n_max + 1)])
    return np.clip(probs, 0.0, 1.0)


def hs_distance(W1: WignerGrid, W2: WignerGrid) -> float:
    if not (np.array_equal(W1.x, W2.x) and np.array_equal(W1.p, W2.p)):
        raise GridMismatch("Wigner grids differ")
    return float(2 * np.pi * np.sum((W1.values - W2.values) ** 2) * W1.dx * W1.dp)


def vacuum_wigner(x=None, p=None) -> WignerGrid:
    return gaussian_wigner(GaussianState(0.5 * np.eye(2)), x, p)


def export_wigner_csv(W: WignerGrid, path) -> None:
    X, P = np.meshgrid(W.x, W.p, indexing="ij")
    write_csv(path, ["x", "p", "W"], np.column_stack([X.ravel(), P.ravel(), W.values.ravel()]))


def subtracted_wigner(sub, proj, idx, x=None, p=None, u=None, v=None) -> WignerGrid:
    return wigner_from_charfn(charfn_sub(sub, proj, idx, u, v), x, p)


def psq_wigner(proj, r, idx, x=None, p=None) -> WignerGrid:
    """Closed-form TRWF of the squeezed state at delay index ``idx``."""
    return gaussian_wigner(gaussian_trwf(proj, r, idx), x, p)
