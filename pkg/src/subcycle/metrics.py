"""Scalar diagnostics of TRWF time series."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnphysicalCovariance
from .phasespace import V_VAC, GaussianState


@dataclass(frozen=True)
class EllipseParams:
    v_max: float
    v_min: float
    angle: float
    t_d: float


@dataclass(frozen=True)
class MetricSeries:
    t_d: np.ndarray
    metrological_power: np.ndarray
    origin_value: np.ndarray
    thermal_nbar: np.ndarray


def _cov(state):
    return state.cov if isinstance(state, GaussianState) else np.asarray(state, float)


def squeeze_ellipse(state, t_d: float = 0.0, iso_tol: float = 1e-12) -> EllipseParams:
    """Eigen-decomposition of the covariance; angle of the V_max axis in (-pi/2, pi/2]."""
    ev, evec = np.linalg.eigh(_cov(state))
    v_min, v_max = float(ev[0]), float(ev[1])
    if v_max - v_min <= iso_tol:
        return EllipseParams(v_max, v_min, 0.0, float(t_d))
    angle = float(np.arctan2(evec[1, 1], evec[0, 1]))
    if angle <= -np.pi / 2:
        angle += np.pi
    elif angle > np.pi / 2:
        angle -= np.pi
    return EllipseParams(v_max, v_min, angle, float(t_d))


def ellipse_series(covs, t_d):
    """Vectorized ellipse parameters: (v_max, v_min, unwrapped angle)."""
    covs = np.asarray(covs, float)
    ev, evec = np.linalg.eigh(covs)
    angle = np.arctan2(evec[:, 1, 1], evec[:, 0, 1])
    iso = (ev[:, 1] - ev[:, 0]) <= 1e-12
    angle = np.where(iso, 0.0, angle)
    return ev[:, 1], ev[:, 0], 0.5 * np.unwrap(2 * angle)


def angular_velocity(angle, t_d):
    """Central differences of the unwrapped squeezing-axis angle (rad/fs)."""
    return np.gradient(np.asarray(angle, float), np.asarray(t_d, float))


def metrological_power(state) -> float:
    v_min = float(np.linalg.eigvalsh(_cov(state))[0])
    if v_min <= 0:
        raise UnphysicalCovariance("minimum variance must be positive")
    return max(0.0, 0.5 * (1.0 / v_min - 1.0 / V_VAC))


def metrological_power_series(covs) -> np.ndarray:
    v_min = np.linalg.eigvalsh(np.asarray(covs, float))[:, 0]
    return np.clip(0.5 * (1.0 / v_min - 1.0 / V_VAC), 0.0, None)


def vmin_approx(T1, T2, r1, r2, theta1, theta2):
    """Small-r approximation of the lower covariance eigenvalue from two modes."""
    T1, T2 = np.asarray(T1, float), np.asarray(T2, float)
    phi = 2.0 * (np.angle(theta1) - np.angle(theta2))
    inner = (T1 * r1 + T2 * r2) ** 2 + 2 * T1 * T2 * r1 * r2 * (np.cos(phi) - 1.0)
    return 0.5 + T1 * r1**2 - np.sqrt(np.clip(inner, 0.0, None))


def thermal_photon_number(params: EllipseParams, tol: float = 1e-6) -> float:
    """Mean thermal photon number of the equivalent squeezed thermal state."""
    excess = params.v_max * params.v_min / V_VAC**2 - 1.0
    if excess < -4 * tol:
        raise UnphysicalCovariance(f"V_max V_min = {params.v_max * params.v_min:.8g} is below 1/4")
    excess = max(excess, 0.0)
    return 0.5 * (np.sqrt(1.0 + excess) - 1.0)


def thermal_series(covs) -> np.ndarray:
    det = np.linalg.det(np.asarray(covs, float))
    excess = np.clip(det / V_VAC**2 - 1.0, 0.0, None)
    return 0.5 * (np.sqrt(1.0 + excess) - 1.0)


def negativity_trace(origin_values, t_d):
    """Origin-value series with the location and value of its minimum."""
    vals = np.asarray(origin_values, float)
    k = int(np.argmin(vals))
    return vals, float(np.asarray(t_d)[k]), float(vals[k])
