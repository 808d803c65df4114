"""Units, grids, the sech driving pulse and its conformal-time map.

Units are femtoseconds for time and rad/fs for angular frequency.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

THZ = 2.0 * np.pi * 1e-3  # rad/fs per THz
ARCSECH_HALF = float(np.log(2.0 + np.sqrt(3.0)))


def thz_to_rad_fs(f_thz):
    return np.asarray(f_thz, dtype=float) * THZ


def rad_fs_to_thz(omega):
    return np.asarray(omega, dtype=float) / THZ


@dataclass(frozen=True)
class DrivingPulse:
    """Sech-shaped drive E(t) = E0 sech(Gamma t) with effective strength ``r_eff``."""

    fwhm_fs: float = 16.0
    r_eff: float = 0.0
    amplitude_scale: float = 1.0

    def __post_init__(self):
        if not self.fwhm_fs > 0:
            raise ValueError("fwhm_fs must be positive")
        if self.r_eff < 0:
            raise ValueError("r_eff must be non-negative")

    @property
    def gamma(self) -> float:
        return 2.0 * ARCSECH_HALF / self.fwhm_fs

    @property
    def compression(self) -> float:
        """Largest local frequency compression factor of the conformal map."""
        return float(np.sqrt(1.0 + self.r_eff**2))


@dataclass(frozen=True)
class TimeGrid:
    t_min_fs: float
    t_max_fs: float
    n: int

    def __post_init__(self):
        if self.n < 2 or not self.t_max_fs > self.t_min_fs:
            raise ValueError("TimeGrid needs n >= 2 and t_max > t_min")

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min_fs, self.t_max_fs, self.n)

    @property
    def spacing(self) -> float:
        return (self.t_max_fs - self.t_min_fs) / (self.n - 1)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.n, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    @classmethod
    def from_step(cls, t_min, t_max, step):
        n = int(round((t_max - t_min) / step)) + 1
        return cls(float(t_min), float(t_min + (n - 1) * step), n)


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform angular-frequency grid with trapezoidal weights."""

    omega_min: float
    omega_max: float
    n: int

    def __post_init__(self):
        if self.n < 2 or not self.omega_max > self.omega_min:
            raise ValueError("FrequencyGrid needs n >= 2 and omega_max > omega_min")

    @property
    def omega(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n)

    @property
    def spacing(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n - 1)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.n, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    @classmethod
    def from_thz(cls, f_min_thz=0.1, f_max_thz=400.0, n=400):
        return cls(float(f_min_thz * THZ), float(f_max_thz * THZ), int(n))


@dataclass(frozen=True)
class SimConfig:
    field_norm_constant: float = 1.0
    rng_seed: int = 0
    tolerances: dict = field(
        default_factory=lambda: {
            "symplectic": 1e-3,
            "normalization": 1e-4,
            "uncertainty": 1e-6,
            "projection": 1e-6,
        }
    )

    def __post_init__(self):
        if not self.field_norm_constant > 0:
            raise ValueError("field_norm_constant must be positive")
        if any(not v > 0 for v in self.tolerances.values()):
            raise ValueError("all tolerances must be positive")


def driving_field(pulse: DrivingPulse, t):
    return pulse.amplitude_scale / np.cosh(pulse.gamma * np.asarray(t, dtype=float))


def _warp(x, r):
    """arcsinh(sinh x + r) without overflow; beyond |x| = 30 the exponential asymptote is exact to rounding."""
    x = np.asarray(x, dtype=float)
    inner = np.clip(x, -30.0, 30.0)
    direct = np.arcsinh(np.sinh(inner) + r)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        hi = x + np.log1p(2.0 * r * np.exp(-np.abs(x)))
        lo = x - np.log1p(-2.0 * r * np.exp(-np.abs(x)))
    return np.where(x > 30.0, hi, np.where(x < -30.0, lo, direct))


def conformal_time(pulse: DrivingPulse, t):
    g = pulse.gamma
    return _warp(g * np.asarray(t, dtype=float), pulse.r_eff) / g


def conformal_time_inverse(pulse: DrivingPulse, t):
    g = pulse.gamma
    return _warp(g * np.asarray(t, dtype=float), -pulse.r_eff) / g


def conformal_shift(pulse: DrivingPulse, t):
    """tau^{-1}(t) - t, the compactly supported part of the inverse map."""
    t = np.asarray(t, dtype=float)
    return conformal_time_inverse(pulse, t) - t


def _log_cosh(x):
    a = np.abs(x)
    return a + np.log1p(np.exp(-2.0 * a)) - np.log(2.0)


def conformal_derivative(pulse: DrivingPulse, t):
    """d tau / dt = cosh(Gamma t) / cosh(Gamma tau(t)), evaluated without overflow."""
    t = np.asarray(t, dtype=float)
    g = pulse.gamma
    return np.exp(_log_cosh(g * t) - _log_cosh(g * conformal_time(pulse, t)))


def default_time_grid(pulse: DrivingPulse, omega_max: float, step=None) -> TimeGrid:
    """Symmetric window and step that resolve the kernel integrand on ``omega_max``.

    The step keeps eight points per shortest compressed period; the window
    reaches past both the drive's 1e-8 level and the point where the
    conformal shift times ``omega_max`` drops below 1e-9.
    """
    g = pulse.gamma
    if step is None:
        step = np.pi / (4.0 * omega_max * pulse.compression)
    half = np.arccosh(1e8) / g
    if pulse.r_eff > 0:
        # |s(t)| ~ 2 r exp(-Gamma |t|) / Gamma asymptotically on either side.
        half = max(half, np.log(max(2 * pulse.r_eff * omega_max / g * 1e9, 1.0)) / g)
    n = int(np.ceil(2 * half / step)) + 1
    return TimeGrid(-half, half, n)
