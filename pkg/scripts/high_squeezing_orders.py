"""Gram-Charlier fidelity against expansion order for strong squeezing (r_eff = 20, gate 8 fs).

The evaluated delay is the one where the TRWF lies farthest from vacuum on -30..-15 fs.

    python scripts/high_squeezing_orders.py [--f-max 1200 --n 1200 --threshold 4e-3]
"""
import argparse

import numpy as np

from subcycle.detection import GatingFunction, project_modes
from subcycle.phasespace import GaussianState, covariance_series, gaussian_wigner, hs_distance, vacuum_wigner
from subcycle.physgrid import DrivingPulse, FrequencyGrid
from subcycle.squeezing import bloch_messiah, compute_kernel
from subcycle.tomography import gram_charlier, wigner_moments


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--f-max", type=float, default=1200.0)
    ap.add_argument("--n", type=int, default=1200)
    ap.add_argument("--threshold", type=float, default=4e-3)
    args = ap.parse_args()
    kernel = compute_kernel(DrivingPulse(16.0, 20.0), FrequencyGrid.from_thz(0.1, args.f_max, args.n))
    modes = bloch_messiah(kernel, args.threshold)
    print("r_j:", np.array2string(modes.r, precision=5))
    t_d = np.round(np.arange(-30.0, -15.0 + 1e-9, 0.1), 10)
    covs = covariance_series(project_modes(modes, GatingFunction(8.0), t_d), modes.r)
    vac = vacuum_wigner()
    dist = np.array([hs_distance(gaussian_wigner(GaussianState(c)), vac) for c in covs])
    k = int(np.argmax(dist))
    W = gaussian_wigner(GaussianState(covs[k]))
    print(f"farthest from vacuum at t_d = {t_d[k]:g} fs (D_HS to vacuum {dist[k]:.4f})")
    for order in (2, 4, 6, 8):
        print(f"  order {order}: D_HS = {hs_distance(W, gram_charlier(wigner_moments(W, order))):.5f}")


if __name__ == "__main__":
    main()
