"""Run scenarios from configs/ and check each bundle against its built-in reference table.

    python scripts/run_scenarios.py [scenario ...] [--out results] [--threads N]
"""
import argparse
import json
import time
from pathlib import Path

from subcycle import config, runner
from subcycle.references import BUILTIN, compare

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("scenarios", nargs="*", default=sorted(config.SCENARIOS))
    ap.add_argument("--out", type=Path, default=ROOT / "results")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    for name in args.scenarios:
        path = ROOT / "configs" / f"{name}.json"
        cfg = config.load(path) if path.exists() else config.defaults(name)
        t0 = time.perf_counter()
        out = runner.run(cfg, args.out / name, threads=args.threads)
        dt = time.perf_counter() - t0
        print(f"[{name}] {dt:.1f} s -> {out}")
        if cfg["scenario"] in BUILTIN:
            report = compare(out, None)
            for row in report["criteria"]:
                print(f"    {row['verdict']:4s} {row['criterion']:32s} measured {row['measured']:.6g}"
                      f"  expected {row['expected']:g} +- {row['tolerance']:.3g}")
            (out / "compare_report.json").write_text(json.dumps(report, indent=2) + "\n")


if __name__ == "__main__":
    main()
