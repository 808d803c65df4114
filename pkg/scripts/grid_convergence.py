"""Squeezing spectrum, symplectic defect and pairing residual against the frequency grid.

    python scripts/grid_convergence.py [--r-eff 5]
"""
import argparse
import time

import numpy as np

from subcycle.physgrid import DrivingPulse, FrequencyGrid
from subcycle.squeezing import (
    band_defect,
    bloch_messiah,
    compute_kernel,
    reconstruction_residual,
    symplectic_defect,
    truncation_completeness,
)

GRIDS = [(400.0, 400), (400.0, 800), (800.0, 800), (1200.0, 1200)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--r-eff", type=float, default=5.0)
    ap.add_argument("--threshold", type=float, default=1e-3)
    args = ap.parse_args()
    pulse = DrivingPulse(16.0, args.r_eff)
    print(f"r_eff = {args.r_eff}, delta_d = 16 fs, compression {pulse.compression:.3f}")
    print(f"{'f_max':>7} {'n':>5} {'time':>6}  r_j{'':40s} defect    band      P-res     Q-res     dropped")
    for f_max, n in GRIDS:
        t0 = time.perf_counter()
        k = compute_kernel(pulse, FrequencyGrid.from_thz(0.1, f_max, n))
        m = bloch_messiah(k, args.threshold, pairing_tol=1.0)
        dt = time.perf_counter() - t0
        p_res, q_res = reconstruction_residual(k, m)
        r = np.array2string(m.r[:5], precision=6, floatmode="fixed")
        print(f"{f_max:7.0f} {n:5d} {dt:6.1f}  {r:43s} {symplectic_defect(k, m.output_columns):.2e}  "
              f"{band_defect(k):.2e}  {p_res:.2e}  {q_res:.2e}  {truncation_completeness(m):.1e}")


if __name__ == "__main__":
    main()
