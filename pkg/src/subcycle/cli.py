"""Command-line entry point: ``subcycle run | compare | list-scenarios``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import config as config_mod
from . import runner
from .errors import ConfigInvalid, MissingArtifact, SubcycleError
from .references import compare

EXIT_OK, EXIT_CONFIG, EXIT_ACCEPTANCE = 0, 2, 3


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON configuration file")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--seed", type=int, help="overrides the seed in the configuration")
    common.add_argument("--threads", type=int, default=1, help="worker threads for delay sweeps")

    ap = argparse.ArgumentParser(prog="subcycle", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", parents=[common], help="compute a scenario and write its bundle")
    run.add_argument("--scenario", choices=sorted(config_mod.SCENARIOS),
                     help="use the scenario defaults when no --config is given")
    cmp_ = sub.add_parser("compare", parents=[common], help="check a bundle against a reference table")
    cmp_.add_argument("bundle", type=Path)
    cmp_.add_argument("--reference", help="reference JSON file or built-in scenario name")
    sub.add_parser("list-scenarios", parents=[common], help="print the available scenarios")
    return ap


def _load_config(ns) -> dict:
    if ns.config is not None:
        raw = json.loads(ns.config.read_text()) if ns.config.is_file() else None
        if raw is None:
            raise ConfigInvalid({"<file>": f"{ns.config} does not exist"})
        if "config" in raw and "code_version" in raw:
            raw = raw["config"]  # a manifest: re-ingest its config echo
    elif getattr(ns, "scenario", None):
        raw = {"scenario": ns.scenario}
    else:
        raise ConfigInvalid({"--config": "required (or pass --scenario)"})
    if ns.seed is not None:
        raw = dict(raw, seed=ns.seed)
    return config_mod.validate(raw)


def main(argv=None) -> int:
    ap = _parser()
    ns = ap.parse_args(argv)
    if ns.command == "list-scenarios":
        for name, desc in config_mod.SCENARIOS.items():
            print(f"{name:15s} {desc}")
        return EXIT_OK

    if ns.command == "run":
        try:
            cfg = _load_config(ns)
        except json.JSONDecodeError as exc:
            print(f"config error: not valid JSON ({exc})", file=sys.stderr)
            return EXIT_CONFIG
        except ConfigInvalid as exc:
            for field, msg in exc.problems.items():
                print(f"config error: {field}: {msg}", file=sys.stderr)
            return EXIT_CONFIG
        if ns.out is None:
            print("config error: --out: required", file=sys.stderr)
            return EXIT_CONFIG
        try:
            out = runner.run(cfg, ns.out, threads=ns.threads)
        except SubcycleError as exc:
            print(f"scenario {cfg['scenario']!r} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
            return 1
        print(out)
        return EXIT_OK

    try:
        report = compare(ns.bundle, ns.reference)
    except MissingArtifact as exc:
        print(f"MissingArtifact: {exc}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    text = json.dumps(report, indent=2)
    if ns.out is not None:
        ns.out.mkdir(parents=True, exist_ok=True)
        (ns.out / "compare_report.json").write_text(text + "\n")
    print(text)
    return EXIT_OK if report["passed"] else EXIT_ACCEPTANCE


if __name__ == "__main__":
    sys.exit(main())
