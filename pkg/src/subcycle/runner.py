"""Scenario orchestration: compute everything in memory, then write one bundle."""
from __future__ import annotations

import datetime as _dt
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict

import numpy as np

from . import __version__
from . import eos as eos_mod
from .detection import GatingFunction, project_modes
from .io import complex_table, contour_plot_svg, csv_text, line_plot_svg
from .metrics import angular_velocity, ellipse_series, metrological_power_series, thermal_series, vmin_approx
from .phasespace import (
    charfn_sub,
    covariance_series,
    gaussian_trwf,
    gaussian_wigner,
    hs_distance,
    photon_probabilities,
    subtracted_state,
    subtracted_wigner,
    wigner_origin,
)
from .physgrid import THZ, DrivingPulse, FrequencyGrid, TimeGrid
from .squeezing import field_modes, normalized_overlap, squeezing_modes
from .tomography import (
    default_phases,
    estimate_moments,
    extract_mode,
    gram_charlier,
    inverse_radon,
    marginals_from_wigner,
    sample_quadratures,
    wigner_moments,
)


@dataclass
class Bundle:
    files: Dict[str, str] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def table(self, name, header, rows):
        self.files[name] = csv_text(header, rows)

    def svg(self, name, text):
        self.files[name] = text


def _delays(cfg):
    tg = TimeGrid.from_step(cfg["t_d_min_fs"], cfg["t_d_max_fs"], cfg["t_d_step_fs"])
    return np.round(tg.t, 10)


def _modes(cfg):
    pulse = DrivingPulse(cfg["delta_d_fs"], cfg["r_eff"])
    fgrid = FrequencyGrid.from_thz(cfg["f_min_thz"], cfg["f_max_thz"], cfg["n_freq"])
    return squeezing_modes(pulse, fgrid, cfg["threshold"])


def _label(t):
    return f"{t:+.2f}".replace("+", "p").replace("-", "m").replace(".", "_")


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _modes_tables(b: Bundle, modes, proj):
    b.table("modes.csv", ["j", "r"], [(j + 1, r) for j, r in enumerate(modes.r)])
    cols = [proj.t_d] + [proj.T[j] for j in range(proj.m)] + [proj.theta_vac**2]
    header = ["t_d_fs"] + [f"T{j + 1}" for j in range(proj.m)] + ["theta_vac_sq"]
    b.table("transmissions.csv", header, np.column_stack(cols))
    if proj.m:
        b.svg(
            "transmissions.svg",
            line_plot_svg(proj.t_d, proj.T, [f"T{j + 1}" for j in range(proj.m)],
                          "Transmissions", "t_d (fs)", "T_j"),
        )


def _covariance_table(b: Bundle, modes, proj):
    covs = covariance_series(proj, modes.r)
    vmax, vmin, angle = ellipse_series(covs, proj.t_d)
    M = metrological_power_series(covs)
    if proj.m >= 2:
        approx = vmin_approx(proj.T[0], proj.T[1], modes.r[0], modes.r[1], proj.theta[0], proj.theta[1])
    else:
        approx = np.full(proj.t_d.size, np.nan)
    rows = np.column_stack([
        proj.t_d, covs[:, 0, 0], covs[:, 0, 1], covs[:, 1, 1], vmax, vmin, angle,
        angular_velocity(angle, proj.t_d), M, approx, thermal_series(covs),
    ])
    b.table("covariance.csv", ["t_d_fs", "s_xx", "s_xp", "s_pp", "v_max", "v_min", "angle_rad",
                               "angular_velocity", "metrological_power", "vmin_approx", "thermal_nbar"], rows)
    b.svg("metrological_power.svg",
          line_plot_svg(proj.t_d, [M], None, "Metrological power", "t_d (fs)", "M"))
    k = int(np.argmax(M))
    b.summary["metrological_power_max"] = float(M[k])
    b.summary["metrological_power_t_d_fs"] = float(proj.t_d[k])
    return covs


def _wigner_files(b: Bundle, stem, W, title):
    X, P = np.meshgrid(W.x, W.p, indexing="ij")
    b.table(f"{stem}.csv", ["x", "p", "W"], np.column_stack([X.ravel(), P.ravel(), W.values.ravel()]))
    b.svg(f"{stem}.svg", contour_plot_svg(W.x, W.p, W.values, title=title))


def run_squeezed(cfg, threads=1) -> Bundle:
    b = Bundle()
    modes = _modes(cfg)
    gate = GatingFunction(cfg["delta_p_fs"])
    proj = project_modes(modes, gate, _delays(cfg))
    _modes_tables(b, modes, proj)
    _covariance_table(b, modes, proj)
    tg = TimeGrid.from_step(-60.0, 60.0, 0.1)
    fm = field_modes(modes, tg)
    if modes.m:
        header, cols = complex_table("t_fs", tg.t, fm.alpha)
        b.table("field_modes.csv", header, cols)
    snaps = project_modes(modes, gate, cfg["snapshot_delays_fs"])
    for i, t in enumerate(cfg["snapshot_delays_fs"]):
        W = gaussian_wigner(gaussian_trwf(snaps, modes.r, i))
        _wigner_files(b, f"trwf_psq_{_label(t)}", W, f"W_psq at t_d = {t:g} fs")
    b.summary["r"] = [float(r) for r in modes.r]
    if proj.m:
        b.summary["T1_peak_t_d_fs"] = float(proj.t_d[int(np.argmax(proj.T[0]))])
    return b


def run_subtracted(cfg, threads=1) -> Bundle:
    b = Bundle()
    modes = _modes(cfg)
    gate = GatingFunction(cfg["delta_p_fs"])
    t_d = _delays(cfg)
    proj = project_modes(modes, gate, t_d)
    _modes_tables(b, modes, proj)
    _covariance_table(b, modes, proj)
    sub = subtracted_state(modes.r)

    def per_delay(i):
        W = subtracted_wigner(sub, proj, i)
        return (wigner_origin(charfn_sub(sub, proj, i)), *photon_probabilities(W, 2))

    rows = np.array(_pmap(per_delay, range(t_d.size), threads))
    b.table("origin.csv", ["t_d_fs", "W_origin", "P0", "P1", "P2"], np.column_stack([t_d, rows]))
    b.svg("origin.svg", line_plot_svg(t_d, [rows[:, 0]], None, "TRWF at the origin", "t_d (fs)", "W(0,0)"))
    b.svg("photon_probabilities.svg",
          line_plot_svg(t_d, [rows[:, 1], rows[:, 2]], ["P(0)", "P(1)"], "Photon numbers", "t_d (fs)", "P"))
    snaps = project_modes(modes, gate, cfg["snapshot_delays_fs"])
    for i, t in enumerate(cfg["snapshot_delays_fs"]):
        _wigner_files(b, f"trwf_sub_{_label(t)}", subtracted_wigner(sub, snaps, i), f"W_sub at t_d = {t:g} fs")
    k0, k1 = int(np.argmin(rows[:, 0])), int(np.argmax(rows[:, 2]))
    b.summary.update(
        r=[float(r) for r in modes.r],
        origin_min=float(rows[k0, 0]), origin_min_t_d_fs=float(t_d[k0]),
        P1_max=float(rows[k1, 2]), P1_max_t_d_fs=float(t_d[k1]),
    )
    return b


def run_eos(cfg, threads=1) -> Bundle:
    b = Bundle()
    probe = eos_mod.ProbeSpectrum(cfg["probe_center_thz"], cfg["probe_width_thz"])
    grids = eos_mod.EOSGrids.default(cfg["nir_max_thz"], cfg["thz_max_thz"])
    kernel = eos_mod.build_eos_kernel(DrivingPulse(cfg["delta_d_fs"], cfg["r_eff"]), grids)
    cut = np.arange(cfg["cutoff_min_thz"], cfg["cutoff_max_thz"] + 0.5 * cfg["cutoff_step_thz"],
                    cfg["cutoff_step_thz"])
    scan = eos_mod.filter_scan(probe, cut, kernel)
    b.table("filter_scan.csv", ["cutoff_thz", "alpha_comm", "beta_comm", "shot_noise"],
            np.column_stack([scan.cutoff_thz, scan.alpha_comm, scan.beta_comm, scan.shot_noise]))
    b.svg("filter_scan.svg", line_plot_svg(scan.cutoff_thz, [scan.alpha_comm, scan.beta_comm],
                                           ["[a,a+]/N", "[b,b+]/N"], "Filter scan", "cutoff (THz)", "ratio"))
    best = eos_mod.thz_modes(probe, eos_mod.SpectralFilter(scan.optimum_thz * THZ), kernel)
    full = eos_mod.thz_modes(probe, eos_mod.SpectralFilter(cfg["nir_max_thz"] * THZ), kernel)
    f = best.Omega / THZ
    b.table("thz_modes.csv", ["Omega_thz", "abs_alpha", "abs_beta", "re_alpha", "im_alpha", "re_beta", "im_beta"],
            np.column_stack([f, np.abs(best.alpha), np.abs(best.beta), best.alpha.real, best.alpha.imag,
                             best.beta.real, best.beta.imag]))
    b.svg("thz_modes.svg", line_plot_svg(f, [np.abs(best.alpha), np.abs(best.beta)], ["|alpha|", "|beta|"],
                                         "THz modes at the optimal cutoff", "Omega (THz)", "mode"))
    phi = np.linspace(0.0, np.pi, 181)
    b.table("vacuum_fluct.csv", ["phi_rad", "unfiltered", "optimal"],
            np.column_stack([phi, eos_mod.vacuum_fluct(full, phi), eos_mod.vacuum_fluct(best, phi)]))
    peak, fwhm = eos_mod.profile_stats(best.Omega, best.beta)
    b.summary.update(
        optimum_cutoff_thz=scan.optimum_thz, beta_peak_thz=peak, beta_fwhm_thz=fwhm,
        alpha_over_beta=float(np.abs(best.alpha).max() / max(np.abs(best.beta).max(), 1e-300)),
        phase_variation_optimal=eos_mod.phase_variation(best),
    )
    b.table("eos_summary.csv", ["optimum_cutoff_thz", "beta_peak_thz", "beta_fwhm_thz"],
            [(scan.optimum_thz, peak, fwhm)])
    return b


def run_reconstruct(cfg, threads=1) -> Bundle:
    b = Bundle()
    modes = _modes(cfg)
    gate = GatingFunction(cfg["delta_p_fs"])
    t = cfg["reconstruct_delay_fs"]
    proj = project_modes(modes, gate, [t])
    if cfg["state"] == "psq":
        state = gaussian_trwf(proj, modes.r, 0)
        W = gaussian_wigner(state)
        source = state
    else:
        W = subtracted_wigner(subtracted_state(modes.r), proj, 0)
        source = W
    order = cfg["gc_order"]
    phases = default_phases(order)
    sets = _pmap(lambda k: sample_quadratures(source, phases[k], t, cfg["n_samples"], cfg["seed"], k, 0),
                 range(phases.size), threads)
    sampled = estimate_moments(sets, order)
    gc_exact = gram_charlier(wigner_moments(W, order))
    gc_sampled = gram_charlier(sampled)
    radon = inverse_radon(marginals_from_wigner(W, np.arange(cfg["n_radon_phases"]) * np.pi / cfg["n_radon_phases"]))
    b.table("samples.csv", ["phase_rad", "t_d_fs", "value"],
            [(s.phase, s.t_d, v) for s in sets for v in s.samples])
    b.table("reconstruction.csv",
            ["gc_order", "dhs_gc_exact", "dhs_gc_sampled", "dhs_radon", "origin_exact", "origin_radon"],
            [(order, hs_distance(W, gc_exact), hs_distance(W, gc_sampled), hs_distance(W, radon),
              W.value_at_origin(), radon.value_at_origin())])
    for stem, grid, title in [("trwf_exact", W, "exact"), ("trwf_gc_exact", gc_exact, "Gram-Charlier (exact)"),
                              ("trwf_gc_sampled", gc_sampled, "Gram-Charlier (sampled)"),
                              ("trwf_radon", radon, "inverse Radon")]:
        _wigner_files(b, stem, grid, title)
    b.summary.update(dhs_gc_exact=hs_distance(W, gc_exact), dhs_gc_sampled=hs_distance(W, gc_sampled),
                     dhs_radon=hs_distance(W, radon))
    return b


def run_extract(cfg, threads=1) -> Bundle:
    b = Bundle()
    modes = _modes(cfg)
    gate = GatingFunction(cfg["delta_p_fs"])
    tg = TimeGrid.from_step(cfg["t_d_min_fs"], cfg["t_d_max_fs"], cfg["t_d_step_fs"])
    modes = field_modes(modes, tg)
    proj = project_modes(modes, gate, tg.t)
    covs = covariance_series(proj, modes.r)
    ex = extract_mode(covs, tg.t, gate, cfg["regularization"])
    overlap = normalized_overlap(np.abs(ex.alpha), np.abs(modes.alpha[0]))
    b.table("extracted_mode.csv", ["t_fs", "re_alpha", "im_alpha", "re_true", "im_true", "abs_theta"],
            np.column_stack([tg.t, ex.alpha.real, ex.alpha.imag, modes.alpha[0].real, modes.alpha[0].imag,
                             np.abs(ex.theta)]))
    b.table("extraction.csv", ["r_recovered", "r_true", "overlap"], [(ex.r, modes.r[0], overlap)])
    scale = np.abs(modes.alpha[0]).max() / max(np.abs(ex.alpha).max(), 1e-300)
    b.svg("extracted_mode.svg", line_plot_svg(tg.t, [np.abs(ex.alpha) * scale, np.abs(modes.alpha[0])],
                                              ["recovered", "exact"], "Dominant field mode", "t (fs)", "|alpha|"))
    b.summary.update(r_recovered=ex.r, r_true=float(modes.r[0]), overlap=overlap)
    return b


RUNNERS: Dict[str, Callable] = {
    "squeezed": run_squeezed,
    "subtracted": run_subtracted,
    "single-photon": run_subtracted,
    "eos": run_eos,
    "reconstruct": run_reconstruct,
    "extract-mode": run_extract,
}


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def run(cfg: dict, out_dir, threads: int = 1) -> Path:
    """Compute the scenario and write its bundle; files appear only after compute succeeds."""
    bundle = RUNNERS[cfg["scenario"]](cfg, threads=max(1, int(threads)))
    bundle.files["summary.json"] = json.dumps(_jsonable(bundle.summary), indent=2, sort_keys=True) + "\n"
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in sorted(bundle.files.items()):
        (out / name).write_text(text)
    manifest = {
        "config": cfg,
        "code_version": __version__,
        "seeds": {"seed": cfg["seed"]},
        "files": {n: hashlib.sha256(t.encode()).hexdigest() for n, t in sorted(bundle.files.items())},
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return out
