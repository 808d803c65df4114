"""Bogoliubov kernel of the conformal-time squeezer and its Bloch-Messiah reduction."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import DecompositionFailed, GridTooNarrow, SingularFrequency
from .physgrid import (
    DrivingPulse,
    FrequencyGrid,
    TimeGrid,
    conformal_shift,
    conformal_time,
    default_time_grid,
    driving_field,
)

_CHUNK = 2048


@dataclass(frozen=True)
class BogoliubovKernel:
    """Discrete Bogoliubov pair in the orthonormal basis of weighted grid modes.

    ``P[i, k] = p(w_i, w_k) sqrt(w_i w_k)`` (plus the identity from the delta
    term) and likewise for ``Q``, so that ``b_i = sum_k P_ik a_k + Q_ik a_k^+``
    for the discrete mode operators ``b_i = sqrt(weight_i) b(w_i)``.
    """

    grid: FrequencyGrid
    P: np.ndarray
    Q: np.ndarray
    pulse: DrivingPulse
    tgrid: TimeGrid


@dataclass(frozen=True)
class PrincipalModeSet:
    r: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    grid: FrequencyGrid
    pulse: DrivingPulse
    all_r: np.ndarray
    truncation_threshold: float = 1e-3
    alpha: Optional[np.ndarray] = None
    alpha_grid: Optional[TimeGrid] = None
    field_norm_constant: float = 1.0

    @property
    def m(self) -> int:
        return int(self.r.size)

    @property
    def output_columns(self) -> np.ndarray:
        """Columns ``conj(psi_j) * sqrt(weight)``: mode j as a vector on the grid basis."""
        return (np.conj(self.psi) * np.sqrt(self.grid.weights)).T

    @property
    def mean_photon_number(self) -> float:
        return float(np.sum(np.sinh(self.r) ** 2))


def _deviation_integral(omega, omega_prime, t, wt, shift):
    """sum_t wt e^{i w t}(e^{i w s(t)} - 1) e^{-i w' t} for all (w, w') pairs, chunked over t."""
    out = np.zeros((omega.size, omega_prime.size), dtype=complex)
    for lo in range(0, t.size, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        tt, ss = t[sl], shift[sl]
        a = np.exp(1j * np.outer(omega, tt)) * np.expm1(1j * np.outer(omega, ss)) * wt[sl]
        out += a @ np.exp(-1j * np.outer(tt, omega_prime))
    return out


def _check_inputs(pulse, fgrid, tgrid):
    if fgrid.omega_min <= 0:
        raise SingularFrequency("omega_min must be > 0 to avoid the 1/sqrt(omega) singularity")
    for edge in (tgrid.t_min_fs, tgrid.t_max_fs):
        if abs(float(conformal_shift(pulse, edge))) > 1e-4:
            raise GridTooNarrow(
                f"time window edge {edge:.3g} fs cuts the conformal transition "
                f"(shift {float(conformal_shift(pulse, edge)):.3g} fs)"
            )


def compute_kernel(
    pulse: DrivingPulse, fgrid: FrequencyGrid, tgrid: Optional[TimeGrid] = None
) -> BogoliubovKernel:
    """Discretize p and q with the delta term separated off analytically."""
    if tgrid is None:
        tgrid = default_time_grid(pulse, fgrid.omega_max)
    _check_inputs(pulse, fgrid, tgrid)
    w = fgrid.omega
    n = w.size
    if pulse.r_eff == 0:
        return BogoliubovKernel(fgrid, np.eye(n, dtype=complex), np.zeros((n, n), complex), pulse, tgrid)

    t, wt = tgrid.t, tgrid.weights
    s = conformal_shift(pulse, t)
    sq = np.sqrt(fgrid.weights)
    fac = np.sqrt(np.outer(1.0 / w, w)) * np.outer(sq, sq) / (2.0 * np.pi)

    P = np.zeros((n, n), dtype=complex)
    Q = np.zeros((n, n), dtype=complex)
    for lo in range(0, t.size, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        a = np.exp(1j * np.outer(w, t[sl])) * np.expm1(1j * np.outer(w, s[sl])) * wt[sl]
        b = np.exp(-1j * np.outer(t[sl], w))
        P += a @ b
        Q += a @ np.conj(b)
    P = np.eye(n) + P * fac
    Q = -Q * fac
    return BogoliubovKernel(fgrid, P, Q, pulse, tgrid)


def kernel_entries(pulse: DrivingPulse, omega, omega_prime, tgrid: TimeGrid) -> np.ndarray:
    """Non-singular part of p(w, w') for arbitrary-sign w' (w > 0).

    Evaluated by an independent elementwise quadrature; used to check the
    mirror identity q(w, w') = -p(w, -w').
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    omega_prime = np.atleast_1d(np.asarray(omega_prime, dtype=float))
    t, wt = tgrid.t, tgrid.weights
    s = conformal_shift(pulse, t)
    vals = np.empty(omega.shape, dtype=complex)
    for idx, (wa, wb) in enumerate(zip(omega, omega_prime)):
        integrand = np.exp(1j * (wa - wb) * t) * np.expm1(1j * wa * s)
        vals[idx] = np.sum(wt * integrand)
    return np.sqrt(np.abs(omega_prime / omega)) * vals / (2.0 * np.pi)


def symplectic_defect(kernel: BogoliubovKernel, basis: Optional[np.ndarray] = None) -> float:
    """Operator norm of PP^+ - QQ^+ - I, restricted to ``basis`` columns if given."""
    D = kernel.P @ kernel.P.conj().T - kernel.Q @ kernel.Q.conj().T
    D -= np.eye(D.shape[0])
    if basis is not None:
        D = basis.conj().T @ D @ basis
    return float(np.linalg.norm(D, 2))


def band_defect(kernel: BogoliubovKernel, omega_limit: Optional[float] = None) -> float:
    """Defect on the low-frequency block unaffected by the grid-top truncation."""
    if omega_limit is None:
        omega_limit = kernel.grid.omega_max / (2.0 * kernel.pulse.compression)
    keep = kernel.grid.omega <= omega_limit
    E = np.zeros((keep.size, int(keep.sum())))
    E[np.flatnonzero(keep), np.arange(int(keep.sum()))] = 1.0
    return symplectic_defect(kernel, E)


def bloch_messiah(
    kernel: BogoliubovKernel, threshold: float = 1e-3, pairing_tol: float = 1e-2
) -> PrincipalModeSet:
    """Principal squeezed modes from the SVD of Q with phases fixed against P."""
    grid = kernel.grid
    sw = np.sqrt(grid.weights)
    U, sv, Vh = np.linalg.svd(kernel.Q)
    r_all = np.arcsinh(sv)
    keep = np.flatnonzero(r_all >= threshold)
    U = U[:, keep].copy()
    Vh = Vh[keep].copy()
    r = r_all[keep]

    # Order near-degenerate singular values by spectral centroid.
    if r.size > 1:
        centroid = np.sum(np.abs(U) ** 2 * grid.omega[:, None], axis=0)
        key = np.round(r / max(r[0], 1e-300), 9)
        order = np.lexsort((centroid, -key))
        U, Vh, r = U[:, order], Vh[order], r[order]

    for j in range(r.size):
        c = U[:, j].conj() @ kernel.P @ Vh[j]
        if abs(abs(c) - np.cosh(r[j])) > pairing_tol * np.cosh(r[j]):
            raise DecompositionFailed(
                f"mode {j}: |u^+ P v| = {abs(c):.6g} but cosh r = {np.cosh(r[j]):.6g}"
            )
        rot = np.exp(0.5j * np.angle(c))
        U[:, j] *= rot
        Vh[j] /= rot
        # Only a joint sign flip keeps the P-pairing real-positive.
        psi_j = np.conj(U[:, j])
        k = np.argmax(np.abs(psi_j))
        if psi_j[k].real < 0:
            U[:, j] *= -1
            Vh[j] *= -1

    psi = np.conj(U).T / sw
    phi = np.conj(Vh) / sw
    return PrincipalModeSet(
        r=r, psi=psi, phi=phi, grid=grid, pulse=kernel.pulse, all_r=r_all, truncation_threshold=threshold
    )


def squeezing_modes(
    pulse: DrivingPulse,
    fgrid: Optional[FrequencyGrid] = None,
    threshold: float = 1e-3,
    tgrid: Optional[TimeGrid] = None,
) -> PrincipalModeSet:
    """Convenience pipeline: kernel on the default grid followed by the reduction."""
    if fgrid is None:
        fgrid = FrequencyGrid.from_thz()
    return bloch_messiah(compute_kernel(pulse, fgrid, tgrid), threshold)


def reconstruction_residual(kernel: BogoliubovKernel, modes: PrincipalModeSet):
    """Residuals of P v_j = cosh(r_j) u_j and of Q against its retained-mode sum.

    Outside the retained modes P acts as a passive unitary (the pure time
    warp), which leaves vacuum invariant, so only its action on the retained
    input modes is checked.
    """
    sw = np.sqrt(modes.grid.weights)
    Ucols = modes.output_columns
    Vcols = (modes.phi * sw).T
    p_res = kernel.P @ np.conj(Vcols) - Ucols * np.cosh(modes.r)
    q_rec = Ucols @ np.diag(np.sinh(modes.r)) @ Vcols.conj().T
    return float(np.linalg.norm(p_res, 2)), float(np.linalg.norm(kernel.Q - q_rec, 2))


def truncation_completeness(modes: PrincipalModeSet) -> float:
    """Fraction of photon number carried by the dropped modes."""
    total = np.sum(np.sinh(modes.all_r) ** 2)
    if total == 0:
        return 0.0
    return float(1.0 - np.sum(np.sinh(modes.r) ** 2) / total)


def field_modes(modes: PrincipalModeSet, tgrid: TimeGrid) -> PrincipalModeSet:
    """alpha_j(t) = -i sqrt(C) int dw sqrt(w) psi_j^*(w) e^{-i w t}; returns an updated copy."""
    w = modes.grid.omega
    coeff = np.conj(modes.psi) * (modes.grid.weights * np.sqrt(w))
    phase = np.exp(-1j * np.outer(w, tgrid.t))
    alpha = -1j * np.sqrt(modes.field_norm_constant) * (coeff @ phase)
    return replace(modes, alpha=alpha, alpha_grid=tgrid)


def analytic_mode_shape(
    pulse: DrivingPulse, c: complex, phase_fn: Callable[[np.ndarray], np.ndarray], sign: int = 1
) -> Callable[[np.ndarray], np.ndarray]:
    """Closed-form field-mode solution c E(tau(t)) exp(i(+-pi/2 - f(-t)))."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")

    def shape(t):
        t = np.asarray(t, dtype=float)
        env = driving_field(pulse, conformal_time(pulse, t))
        return c * env * np.exp(1j * (sign * np.pi / 2 - phase_fn(-t)))

    return shape


def normalized_overlap(a, b, weights=None) -> float:
    """|<a, b>| / (||a|| ||b||) with optional quadrature weights."""
    a = np.asarray(a)
    b = np.asarray(b)
    w = np.ones(a.shape) if weights is None else weights
    num = abs(np.sum(w * np.conj(a) * b))
    return float(num / np.sqrt(np.sum(w * np.abs(a) ** 2) * np.sum(w * np.abs(b) ** 2)))
