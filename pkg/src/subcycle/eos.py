"""Electro-optic sampling: filtered probe mode and the THz modes alpha(W), beta(W).

All outputs are shot-noise relative, so the crystal prefactor and the probe
amplitude drop out.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyPassband
from .physgrid import THZ, DrivingPulse, FrequencyGrid, TimeGrid, conformal_shift, default_time_grid
from .squeezing import _check_inputs


@dataclass(frozen=True)
class ProbeSpectrum:
    """Gaussian probe E(w) ~ exp(-((w - w_c) / dw)^2)."""

    center_thz: float = 255.0
    width_thz: float = 33.0

    @property
    def omega_c(self) -> float:
        return self.center_thz * THZ

    @property
    def delta_omega(self) -> float:
        return self.width_thz * THZ

    @property
    def duration_fwhm_fs(self) -> float:
        """FWHM of the field envelope |E(t)|."""
        return 4.0 * np.sqrt(np.log(2.0)) / self.delta_omega

    def __call__(self, omega):
        return np.exp(-(((np.asarray(omega, float) - self.omega_c) / self.delta_omega) ** 2))


@dataclass(frozen=True)
class SpectralFilter:
    omega_max: float

    def __post_init__(self):
        if not self.omega_max > 0:
            raise ValueError("filter cutoff must be positive")

    def __call__(self, omega):
        return (np.asarray(omega, float) <= self.omega_max).astype(float)


@dataclass(frozen=True)
class EOSGrids:
    """NIR band [Omega_max, top] and THz band (0, Omega_max], rectangle weights on the latter."""

    omega: np.ndarray
    omega_weights: np.ndarray
    Omega: np.ndarray
    Omega_weights: np.ndarray

    @classmethod
    def default(cls, omega_thz_max=450.0, Omega_thz_max=130.0, n_omega=1200, n_Omega=400):
        w = np.linspace(Omega_thz_max * THZ, omega_thz_max * THZ, n_omega)
        ww = np.full(n_omega, w[1] - w[0])
        ww[0] = ww[-1] = 0.5 * (w[1] - w[0])
        dO = Omega_thz_max * THZ / n_Omega
        Om = dO * np.arange(1, n_Omega + 1)
        return cls(w, ww, Om, np.full(n_Omega, dO))


@dataclass(frozen=True)
class EOSKernel:
    """Oscillatory time integrals shared by every filter setting.

    ``Ia[i, k] = int dt e^{i w_i tau^{-1}(t) - i W_k t}`` and
    ``Ib[i, k] = int dt e^{-i w_i tau^{-1}(t) - i W_k t}``, both computed in
    deviation form (the delta term cannot contribute because w >= W).
    """

    grids: EOSGrids
    pulse: DrivingPulse
    Ia: np.ndarray
    Ib: np.ndarray


@dataclass(frozen=True)
class EOSModes:
    omega: np.ndarray
    h: np.ndarray
    Omega: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    shot_noise_N: float
    Omega_weights: np.ndarray


def build_eos_kernel(
    pulse: Optional[DrivingPulse] = None, grids: Optional[EOSGrids] = None, tgrid: Optional[TimeGrid] = None
) -> EOSKernel:
    pulse = DrivingPulse(16.0, 1.0) if pulse is None else pulse
    grids = EOSGrids.default() if grids is None else grids
    w, Om = grids.omega, grids.Omega
    if tgrid is None:
        tgrid = default_time_grid(pulse, w[-1] + Om[-1])

    _check_inputs(pulse, FrequencyGrid(w[0], w[-1], w.size), tgrid)
    t, wt = tgrid.t, tgrid.weights
    s = conformal_shift(pulse, t)
    Ia = np.zeros((w.size, Om.size), complex)
    Ib = np.zeros((w.size, Om.size), complex)
    chunk = 2048
    for lo in range(0, t.size, chunk):
        sl = slice(lo, lo + chunk)
        a = np.exp(1j * np.outer(w, t[sl])) * np.expm1(1j * np.outer(w, s[sl])) * wt[sl]
        e = np.exp(-1j * np.outer(t[sl], Om))
        Ia += a @ e
        Ib += np.conj(a) @ e
    return EOSKernel(grids, pulse, Ia, Ib)


def probe_mode(probe: ProbeSpectrum, filt: SpectralFilter, omega, weights):
    """Normalized mode h(w) ~ F(w) E(w) / sqrt(w) and the relative shot noise N."""
    omega = np.asarray(omega, float)
    amp = filt(omega) * probe(omega)
    N = float(np.sum(weights * amp**2 / omega))
    if N <= 0 or not np.isfinite(N):
        raise EmptyPassband(f"filter cutoff {filt.omega_max / THZ:.4g} THz removes the whole probe")
    h = amp / np.sqrt(omega) / np.sqrt(N)
    return h.astype(complex), N


def thz_modes(probe: ProbeSpectrum, filt: SpectralFilter, kernel: Optional[EOSKernel] = None) -> EOSModes:
    kernel = build_eos_kernel() if kernel is None else kernel
    g = kernel.grids
    h, N = probe_mode(probe, filt, g.omega, g.omega_weights)
    pref = np.sqrt(g.Omega) / (2.0 * np.pi)
    wgt = g.omega_weights / np.sqrt(g.omega)
    alpha = pref * ((wgt * h) @ kernel.Ia)
    beta = -pref * ((wgt * np.conj(h)) @ kernel.Ib)
    return EOSModes(g.omega, h, g.Omega, alpha, beta, N, g.Omega_weights)


def commutators(modes: EOSModes) -> dict:
    """Shot-noise-relative commutators as frequency-domain overlaps."""
    w = modes.Omega_weights
    return {
        "alpha": float(np.sum(w * np.abs(modes.alpha) ** 2)),
        "beta": float(np.sum(w * np.abs(modes.beta) ** 2)),
        "cross": complex(np.sum(w * modes.alpha * np.conj(modes.beta))),
    }


def commutators_time_domain(modes: EOSModes) -> dict:
    """Same overlaps via the temporal modes over one full period of the THz grid."""
    dO = modes.Omega[1] - modes.Omega[0]
    L = 1 << int(np.ceil(np.log2(2 * modes.Omega.size)))
    period = 2 * np.pi / dO
    a_t = np.fft.fft(modes.Omega_weights * modes.alpha, L)
    b_t = np.fft.fft(modes.Omega_weights * modes.beta, L)
    scale = period / L / (2 * np.pi)
    return {
        "alpha": float(np.sum(np.abs(a_t) ** 2) * scale),
        "beta": float(np.sum(np.abs(b_t) ** 2) * scale),
        "cross": complex(np.sum(a_t * np.conj(b_t)) * scale),
    }


def waveplate_phase(epsilon):
    """phi(eps) = arccos(sqrt(-cos eps)), defined for cos eps <= 0."""
    c = -np.cos(np.asarray(epsilon, float))
    if np.any(c < -1e-12):
        raise ValueError("waveplate angle needs cos(epsilon) <= 0")
    return np.arccos(np.sqrt(np.clip(c, 0.0, 1.0)))


def vacuum_fluct(modes: EOSModes, phi) -> np.ndarray:
    """Delta S^2_THz(phi) / N."""
    c = commutators(modes)
    return c["alpha"] + c["beta"] + 2.0 * np.real(np.exp(2j * np.asarray(phi, float)) * c["cross"])


def phase_variation(modes: EOSModes, n: int = 181) -> float:
    """(max - min) / mean of the vacuum fluctuations over phi in [0, pi]."""
    vals = vacuum_fluct(modes, np.linspace(0.0, np.pi, n))
    return float((vals.max() - vals.min()) / vals.mean())


def profile_stats(Omega, values):
    """Peak frequency and FWHM (both THz) of |values|."""
    y = np.abs(np.asarray(values))
    f = np.asarray(Omega) / THZ
    k = int(np.argmax(y))
    half = np.flatnonzero(y >= 0.5 * y[k])
    return float(f[k]), float(f[half[-1]] - f[half[0]])


@dataclass(frozen=True)
class FilterScan:
    cutoff_thz: np.ndarray
    alpha_comm: np.ndarray
    beta_comm: np.ndarray
    shot_noise: np.ndarray

    @property
    def optimum_thz(self) -> float:
        return float(self.cutoff_thz[int(np.argmax(self.beta_comm))])


def filter_scan(probe: ProbeSpectrum, cutoffs_thz, kernel: Optional[EOSKernel] = None) -> FilterScan:
    kernel = build_eos_kernel() if kernel is None else kernel
    cutoffs_thz = np.asarray(cutoffs_thz, float)
    a, b, n = [], [], []
    for c in cutoffs_thz:
        modes = thz_modes(probe, SpectralFilter(c * THZ), kernel)
        comm = commutators(modes)
        a.append(comm["alpha"])
        b.append(comm["beta"])
        n.append(modes.shot_noise_N)
    return FilterScan(cutoffs_thz, np.array(a), np.array(b), np.array(n))
