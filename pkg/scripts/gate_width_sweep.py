"""Peak metrological power and most negative subtracted-state origin value against gate width.

    python scripts/gate_width_sweep.py [--widths 10 15 20 24.5 30 40]
"""
import argparse

import numpy as np

from subcycle.detection import GatingFunction, project_modes
from subcycle.metrics import metrological_power_series
from subcycle.phasespace import charfn_sub, covariance_series, subtracted_state, wigner_origin
from subcycle.physgrid import DrivingPulse
from subcycle.squeezing import squeezing_modes


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--widths", type=float, nargs="+", default=[5.8, 10.0, 15.0, 20.0, 24.5, 30.0, 40.0])
    ap.add_argument("--r-eff", type=float, default=5.0)
    args = ap.parse_args()
    modes = squeezing_modes(DrivingPulse(16.0, args.r_eff))
    sub = subtracted_state(modes.r)
    t_d = np.round(np.arange(-20.0, 5.0 + 1e-9, 0.1), 10)
    print(f"{'gate fs':>8} {'max M':>8} {'at fs':>7} {'min W(0,0)':>11} {'at fs':>7}")
    for width in args.widths:
        proj = project_modes(modes, GatingFunction(width), t_d)
        M = metrological_power_series(covariance_series(proj, modes.r))
        w0 = np.array([wigner_origin(charfn_sub(sub, proj, i)) for i in range(t_d.size)])
        i, j = int(np.argmax(M)), int(np.argmin(w0))
        print(f"{width:8.1f} {M[i]:8.4f} {t_d[i]:7.1f} {w0[j]:11.4f} {t_d[j]:7.1f}")


if __name__ == "__main__":
    main()
