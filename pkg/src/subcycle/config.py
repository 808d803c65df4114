"""Experiment configuration: JSON with unit-suffixed field names, validated up front."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import ConfigInvalid

SCENARIOS = {
    "squeezed": "Pulsed squeezed vacuum: principal modes, transmissions, TRWF snapshots, metrics",
    "subtracted": "Photon-subtracted state: origin negativity, photon-number probabilities",
    "single-photon": "Weak-squeezing subtraction: ultrabroadband single-photon probabilities",
    "eos": "Electro-optic sampling modes, spectral-filter scan and vacuum fluctuations",
    "reconstruct": "Sampled quadratures, Gram-Charlier and inverse-Radon reconstructions",
    "extract-mode": "Dominant field mode and squeezing parameter recovered from a TRWF series",
}

_COMMON = {
    "r_eff": 5.0,
    "delta_d_fs": 16.0,
    "delta_p_fs": 5.8,
    "t_d_min_fs": -40.0,
    "t_d_max_fs": 20.0,
    "t_d_step_fs": 0.1,
    "f_min_thz": 0.1,
    "f_max_thz": 400.0,
    "n_freq": 400,
    "threshold": 1e-3,
    "seed": 0,
    "snapshot_delays_fs": [-14.1, -8.4, 0.0],
}

_PER_SCENARIO = {
    "squeezed": {},
    "subtracted": {
        "delta_p_fs": 24.5,
        "t_d_min_fs": -20.0,
        "t_d_max_fs": 5.0,
        "snapshot_delays_fs": [-7.5],
    },
    "single-photon": {
        "r_eff": 0.1,
        "delta_p_fs": 18.47,
        "threshold": 1e-4,
        "t_d_min_fs": -15.0,
        "t_d_max_fs": 15.0,
        "t_d_step_fs": 0.02,
        "snapshot_delays_fs": [-0.26],
    },
    "eos": {
        "r_eff": 1.0,
        "probe_center_thz": 255.0,
        "probe_width_thz": 33.0,
        "thz_max_thz": 130.0,
        "nir_max_thz": 450.0,
        "cutoff_min_thz": 150.0,
        "cutoff_max_thz": 450.0,
        "cutoff_step_thz": 2.0,
    },
    "reconstruct": {
        "reconstruct_delay_fs": -14.1,
        "gc_order": 2,
        "n_samples": 100000,
        "n_radon_phases": 64,
        "state": "psq",
    },
    "extract-mode": {
        "r_eff": 0.1,
        "t_d_min_fs": -80.0,
        "t_d_max_fs": 80.0,
        "t_d_step_fs": 0.1,
        "regularization": 1e-3,
    },
}

_REMOVE = {
    "eos": {"delta_p_fs", "t_d_min_fs", "t_d_max_fs", "t_d_step_fs", "snapshot_delays_fs", "f_min_thz",
            "f_max_thz", "n_freq", "threshold"},
    "extract-mode": {"snapshot_delays_fs"},
}


def defaults(scenario: str) -> dict:
    cfg = {"scenario": scenario}
    cfg.update({k: v for k, v in _COMMON.items() if k not in _REMOVE.get(scenario, set())})
    cfg.update(_PER_SCENARIO[scenario])
    return cfg


def _positive(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0


def validate(raw: dict) -> dict:
    """Fill defaults and check every field; raises ConfigInvalid listing all problems."""
    if not isinstance(raw, dict):
        raise ConfigInvalid({"<root>": "configuration must be a JSON object"})
    problems = {}
    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigInvalid({"scenario": f"must be one of {sorted(SCENARIOS)}, got {scenario!r}"})
    cfg = defaults(scenario)
    for key, value in raw.items():
        if key not in cfg:
            problems[key] = "unknown field for this scenario"
            continue
        ref = cfg[key]
        if isinstance(ref, bool) or isinstance(ref, str):
            if type(value) is not type(ref):
                problems[key] = f"expected {type(ref).__name__}"
                continue
        elif isinstance(ref, int):
            if not isinstance(value, int) or isinstance(value, bool):
                problems[key] = "expected an integer"
                continue
        elif isinstance(ref, float):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                problems[key] = "expected a number"
                continue
            value = float(value)
        elif isinstance(ref, list):
            if not isinstance(value, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
            ):
                problems[key] = "expected a list of numbers"
                continue
            value = [float(v) for v in value]
        cfg[key] = value

    for key in ("delta_d_fs", "delta_p_fs", "t_d_step_fs", "f_min_thz", "f_max_thz", "threshold",
                "probe_center_thz", "probe_width_thz", "thz_max_thz", "nir_max_thz", "cutoff_step_thz",
                "regularization"):
        if key in cfg and key not in problems and not _positive(cfg[key]):
            problems[key] = "must be > 0"
    if "r_eff" not in problems and not (isinstance(cfg["r_eff"], float) and cfg["r_eff"] >= 0):
        problems["r_eff"] = "must be >= 0"
    if "t_d_min_fs" in cfg and not problems.keys() & {"t_d_min_fs", "t_d_max_fs"}:
        if cfg["t_d_max_fs"] <= cfg["t_d_min_fs"]:
            problems["t_d_max_fs"] = "must exceed t_d_min_fs"
    if "f_max_thz" in cfg and not problems.keys() & {"f_min_thz", "f_max_thz"}:
        if cfg["f_max_thz"] <= cfg["f_min_thz"]:
            problems["f_max_thz"] = "must exceed f_min_thz"
    if "n_freq" in cfg and "n_freq" not in problems and cfg["n_freq"] < 16:
        problems["n_freq"] = "must be >= 16"
    if "seed" not in problems and cfg["seed"] < 0:
        problems["seed"] = "must be >= 0"
    if scenario == "reconstruct":
        if "gc_order" not in problems and cfg["gc_order"] < 2:
            problems["gc_order"] = "must be >= 2"
        if "n_samples" not in problems and cfg["n_samples"] < 100:
            problems["n_samples"] = "must be >= 100"
        if "n_radon_phases" not in problems and cfg["n_radon_phases"] < 16:
            problems["n_radon_phases"] = "must be >= 16"
        if "state" not in problems and cfg["state"] not in ("psq", "sub"):
            problems["state"] = "must be 'psq' or 'sub'"
    if scenario == "eos" and not problems.keys() & {"cutoff_min_thz", "cutoff_max_thz", "thz_max_thz"}:
        if not cfg["thz_max_thz"] < cfg["cutoff_min_thz"] < cfg["cutoff_max_thz"] <= cfg["nir_max_thz"]:
            problems["cutoff_min_thz"] = "need thz_max < cutoff_min < cutoff_max <= nir_max"
    if scenario in ("subtracted", "single-photon") and "r_eff" not in problems and cfg["r_eff"] == 0:
        problems["r_eff"] = "photon subtraction needs r_eff > 0"
    if problems:
        raise ConfigInvalid(problems)
    return cfg


def load(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigInvalid({"<file>": f"{path} does not exist"}) from None
    except json.JSONDecodeError as exc:
        raise ConfigInvalid({"<file>": f"not valid JSON ({exc})"}) from None
    return validate(raw)
