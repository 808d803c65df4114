"""Reference tables for ``compare``: each criterion names a CSV column and a reduction."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import MissingArtifact
from .io import read_csv

# reduce: "row" (value at row index), "max", "min", "argmax"/"argmin" (x_column value at the extremum).
BUILTIN = {
    "squeezed": [
        {"name": "r1", "file": "modes.csv", "column": "r", "reduce": "row", "row": 0, "expected": 0.281, "rel_tol": 0.05},
        {"name": "r2", "file": "modes.csv", "column": "r", "reduce": "row", "row": 1, "expected": 0.046, "rel_tol": 0.05},
        {"name": "r3", "file": "modes.csv", "column": "r", "reduce": "row", "row": 2, "expected": 0.005, "rel_tol": 0.05},
        {"name": "r4", "file": "modes.csv", "column": "r", "reduce": "row", "row": 3, "expected": 0.004, "rel_tol": 0.05},
    ],
    "subtracted": [
        {"name": "peak_metrological_power", "file": "covariance.csv", "column": "metrological_power",
         "reduce": "max", "expected": 0.643, "rel_tol": 0.05},
        {"name": "peak_metrological_power_delay", "file": "covariance.csv", "column": "metrological_power",
         "reduce": "argmax", "x_column": "t_d_fs", "expected": -7.1, "abs_tol": 0.5},
        {"name": "origin_minimum", "file": "origin.csv", "column": "W_origin", "reduce": "min",
         "expected": -0.232, "rel_tol": 0.05},
        {"name": "origin_minimum_delay", "file": "origin.csv", "column": "W_origin", "reduce": "argmin",
         "x_column": "t_d_fs", "expected": -7.5, "abs_tol": 0.5},
    ],
    "single-photon": [
        {"name": "r1", "file": "modes.csv", "column": "r", "reduce": "row", "row": 0, "expected": 0.00961, "rel_tol": 0.03},
        {"name": "r2", "file": "modes.csv", "column": "r", "reduce": "row", "row": 1, "expected": 0.00035, "rel_tol": 0.10},
        {"name": "peak_P1", "file": "origin.csv", "column": "P1", "reduce": "max", "expected": 0.969, "rel_tol": 0.02},
        {"name": "peak_P1_delay", "file": "origin.csv", "column": "P1", "reduce": "argmax", "x_column": "t_d_fs",
         "expected": -0.26, "abs_tol": 0.2},
    ],
    "eos": [
        {"name": "optimal_cutoff", "file": "eos_summary.csv", "column": "optimum_cutoff_thz", "reduce": "row",
         "row": 0, "expected": 212.0, "abs_tol": 5.0},
        {"name": "beta_center", "file": "eos_summary.csv", "column": "beta_peak_thz", "reduce": "row", "row": 0,
         "expected": 57.0, "abs_tol": 3.0},
        {"name": "beta_fwhm", "file": "eos_summary.csv", "column": "beta_fwhm_thz", "reduce": "row", "row": 0,
         "expected": 54.0, "abs_tol": 4.0},
    ],
    "reconstruct": [
        {"name": "gc_order2_psq", "file": "reconstruction.csv", "column": "dhs_gc_exact", "reduce": "row", "row": 0,
         "expected": 0.0007, "rel_tol": 0.30},
        {"name": "radon_round_trip", "file": "reconstruction.csv", "column": "dhs_radon", "reduce": "row", "row": 0,
         "expected": 0.0, "abs_tol": 1e-3},
    ],
    "extract-mode": [
        {"name": "recovered_r", "file": "extraction.csv", "column": "r_recovered", "reduce": "row", "row": 0,
         "expected": 0.00955, "rel_tol": 0.05},
        {"name": "mode_overlap", "file": "extraction.csv", "column": "overlap", "reduce": "row", "row": 0,
         "expected": 1.0, "abs_tol": 0.01},
    ],
}


def load_reference(path_or_scenario) -> list:
    """A JSON file holding a list of criteria, or the name of a built-in table."""
    if str(path_or_scenario) in BUILTIN:
        return BUILTIN[str(path_or_scenario)]
    data = json.loads(Path(path_or_scenario).read_text())
    return data["criteria"] if isinstance(data, dict) else data


def _measure(bundle: Path, crit: dict) -> float:
    path = bundle / crit["file"]
    if not path.is_file():
        raise MissingArtifact(f"{crit['file']} is absent from {bundle}")
    header, data = read_csv(path)
    if crit["column"] not in header:
        raise MissingArtifact(f"column {crit['column']!r} is absent from {crit['file']}")
    y = data[:, header.index(crit["column"])]
    how = crit.get("reduce", "row")
    if how == "row":
        row = crit.get("row", 0)
        return float(y[row]) if row < y.size else math.nan
    if y.size == 0:
        return math.nan
    if how in ("max", "min"):
        return float(y.max() if how == "max" else y.min())
    x = data[:, header.index(crit["x_column"])]
    return float(x[int(np.argmax(y) if how == "argmax" else np.argmin(y))])


def _tolerance(crit: dict) -> float:
    if "abs_tol" in crit:
        return float(crit["abs_tol"])
    return abs(float(crit["expected"])) * float(crit["rel_tol"])


def compare(bundle_dir, reference) -> dict:
    """Evaluate every criterion against the bundle; the report is JSON-serializable."""
    bundle = Path(bundle_dir)
    manifest = bundle / "manifest.json"
    if not manifest.is_file():
        raise MissingArtifact(f"no manifest.json in {bundle}")
    scenario = json.loads(manifest.read_text())["config"]["scenario"]
    criteria = load_reference(scenario if reference is None else reference)
    results = []
    for crit in criteria:
        measured = _measure(bundle, crit)
        tol = _tolerance(crit)
        ok = math.isfinite(measured) and abs(measured - float(crit["expected"])) <= tol
        results.append({
            "criterion": crit["name"],
            "measured": measured if math.isfinite(measured) else None,
            "expected": float(crit["expected"]),
            "tolerance": tol,
            "verdict": "pass" if ok else "fail",
        })
    return {
        "bundle": str(bundle),
        "scenario": scenario,
        "criteria": results,
        "passed": all(r["verdict"] == "pass" for r in results),
    }
