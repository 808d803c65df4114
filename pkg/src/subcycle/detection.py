"""Subcycle gate, detection-mode normalization and principal-mode projections."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import fftconvolve

from .errors import GateTooWide, SpacingViolation
from .io import write_csv
from .physgrid import FrequencyGrid, SimConfig
from .squeezing import BogoliubovKernel, PrincipalModeSet, compute_kernel

LN16 = float(np.log(16.0))


@dataclass(frozen=True)
class GatingFunction:
    """Gaussian gate R(t) with unit area, intensity FWHM ``fwhm_fs`` and CEP ``cep_phase``."""

    fwhm_fs: float
    cep_phase: float = 0.0

    def __post_init__(self):
        if not self.fwhm_fs > 0:
            raise ValueError("gate fwhm_fs must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        d = self.fwhm_fs
        return 2.0 * np.sqrt(np.log(2.0)) / (np.sqrt(np.pi) * d) * np.exp(-4.0 * np.log(2.0) * t**2 / d**2)

    def spectrum(self, omega):
        """Fourier transform int R(t) e^{i w t} dt (real and even)."""
        omega = np.asarray(omega, dtype=float)
        return np.exp(-(omega**2) * self.fwhm_fs**2 / (16.0 * np.log(2.0)))


@dataclass(frozen=True)
class DetectionProjection:
    t_d: np.ndarray
    theta: np.ndarray  # (m, n_td)
    theta_vac: np.ndarray
    norm_N: float
    gate: GatingFunction

    @property
    def T(self) -> np.ndarray:
        return np.abs(self.theta) ** 2

    @property
    def m(self) -> int:
        return int(self.theta.shape[0])


def gate_normalization(gate: GatingFunction, config: Optional[SimConfig] = None) -> float:
    C = 1.0 if config is None else config.field_norm_constant
    return gate.fwhm_fs / np.sqrt(2.0 * C * LN16)


def detection_vector(gate: GatingFunction, grid: FrequencyGrid, t_d, C: float = 1.0) -> np.ndarray:
    """Coefficients c_i with A(t_d) = sum_i c_i b_i on the weighted grid basis.

    Rows index delays. The phase convention makes theta_j = sum_i c_i u_ij.
    """
    w = grid.omega
    N = gate_normalization(gate, SimConfig(field_norm_constant=C))
    amp = -np.sqrt(2.0 * C) * N * np.sqrt(grid.weights * w) * gate.spectrum(w)
    t_d = np.atleast_1d(np.asarray(t_d, dtype=float))
    return amp * np.exp(-1j * np.outer(t_d, w) + 1j * gate.cep_phase)


def _finish(theta, t_d, gate, N, tol):
    total = np.sum(np.abs(theta) ** 2, axis=0)
    if np.any(total > 1.0 + tol):
        raise GateTooWide(f"sum_j |theta_j|^2 reaches {total.max():.6g} > 1")
    theta_vac = np.sqrt(np.clip(1.0 - total, 0.0, None))
    return DetectionProjection(np.asarray(t_d, float), theta, theta_vac, N, gate)


def project_modes(
    modes: PrincipalModeSet,
    gate: GatingFunction,
    t_d,
    method: str = "spectral",
    tol: float = 1e-6,
) -> DetectionProjection:
    """Projection coefficients theta_j(t_d) of the principal modes on the gated detection mode.

    ``method="spectral"`` evaluates the correlation exactly through the gate's
    closed-form spectrum. ``method="time"`` correlates the sampled field modes
    ``modes.alpha`` with R(t) by FFT and interpolates onto ``t_d``.
    """
    t_d = np.atleast_1d(np.asarray(t_d, dtype=float))
    C = modes.field_norm_constant
    N = gate_normalization(gate, SimConfig(field_norm_constant=C))
    if modes.m == 0:
        return _finish(np.zeros((0, t_d.size), complex), t_d, gate, N, tol)
    if method == "spectral":
        vec = detection_vector(gate, modes.grid, t_d, C)
        theta = (vec @ modes.output_columns).T
    elif method == "time":
        if modes.alpha is None:
            raise ValueError("field modes must be computed first (see field_modes)")
        tg = modes.alpha_grid
        t = tg.t
        dt = tg.spacing
        half = min(int(np.ceil(6 * gate.fwhm_fs / dt)), t.size - 1)
        kern = gate(np.arange(-half, half + 1) * dt) * dt
        corr = np.array([fftconvolve(a, kern, mode="same") for a in modes.alpha])
        corr = -1j * np.sqrt(2.0) * N * corr * np.exp(1j * gate.cep_phase)
        theta = np.array([np.interp(t_d, t, c.real) + 1j * np.interp(t_d, t, c.imag) for c in corr])
    else:
        raise ValueError(f"unknown method {method!r}")
    return _finish(theta, t_d, gate, N, tol)


def multimode_marginal_oracle(
    modes: PrincipalModeSet,
    gate: GatingFunction,
    t_d,
    spacing: float = 0.05,
    kernel: Optional[BogoliubovKernel] = None,
    omega_max: Optional[float] = None,
):
    """2x2 covariance of (X, P) at ``t_d`` from the full multimode Gaussian state.

    A kernel is built on its own grid with mode spacing ``spacing / delta_d``
    and applied to vacuum in the real quadrature basis; the two detection
    vectors then project the 2n-dimensional covariance. No Bloch-Messiah
    step or mode truncation is involved. ``omega_max`` (rad/fs) sets the top
    of the oracle grid; near the pulse centre the time warp feeds the
    detection band from frequencies several times higher than it occupies,
    so the oracle grid usually needs to extend well past the mode grid.
    Returns an array of shape
    ``(n_td, 2, 2)`` (or ``(2, 2)`` for a scalar delay).
    """
    pulse = modes.pulse
    if kernel is None:
        dw = spacing / pulse.fwhm_fs
        top = modes.grid.omega_max if omega_max is None else omega_max
        n = int(np.floor(top / dw))
        if not (spacing <= 0.1 and spacing * n >= 10.0):
            raise SpacingViolation(
                f"mode spacing dw*delta_d = {spacing} with N = {n} violates 1 >> dw*delta_d >> 1/N"
            )
        kernel = compute_kernel(pulse, FrequencyGrid(dw, n * dw, n))
    P, Q = kernel.P, kernel.Q
    S = np.block([[(P + Q).real, -(P - Q).imag], [(P + Q).imag, (P - Q).real]])
    cov_out = 0.5 * S @ S.T
    scalar = np.ndim(t_d) == 0
    c = detection_vector(gate, kernel.grid, t_d, modes.field_norm_constant)
    out = []
    for ci in c:
        L = np.block([[ci.real, -ci.imag], [ci.imag, ci.real]])
        out.append(L @ cov_out @ L.T)
    out = np.array(out)
    return out[0] if scalar else out


def export_transmissions_csv(proj: DetectionProjection, path) -> None:
    m = proj.m
    cols = [proj.t_d] + [proj.T[j] for j in range(m)] + [proj.theta_vac**2]
    header = ["t_d_fs"] + [f"T{j + 1}" for j in range(m)] + ["theta_vac_sq"]
    write_csv(path, header, np.column_stack(cols))
