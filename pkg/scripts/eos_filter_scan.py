"""Spectral-filter scan of the electro-optic sampling modes, with the beta profile at the optimum.

    python scripts/eos_filter_scan.py [--r-eff 1]
"""
import argparse

import numpy as np

from subcycle import eos
from subcycle.physgrid import THZ, DrivingPulse


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--r-eff", type=float, default=1.0)
    args = ap.parse_args()
    probe = eos.ProbeSpectrum(255.0, 33.0)
    print(f"probe FWHM duration {probe.duration_fwhm_fs:.2f} fs")
    kernel = eos.build_eos_kernel(DrivingPulse(16.0, args.r_eff))
    scan = eos.filter_scan(probe, np.arange(150.0, 451.0, 10.0), kernel)
    print(f"{'cutoff':>7} {'[a,a+]/N':>11} {'[b,b+]/N':>11}")
    for c, a, b in zip(scan.cutoff_thz, scan.alpha_comm, scan.beta_comm):
        print(f"{c:7.0f} {a:11.4e} {b:11.4e}")
    best = eos.thz_modes(probe, eos.SpectralFilter(scan.optimum_thz * THZ), kernel)
    peak, fwhm = eos.profile_stats(best.Omega, best.beta)
    print(f"optimum cutoff {scan.optimum_thz:g} THz; beta peak {peak:.1f} THz, FWHM {fwhm:.1f} THz; "
          f"phase variation {eos.phase_variation(best):.3e}")


if __name__ == "__main__":
    main()
