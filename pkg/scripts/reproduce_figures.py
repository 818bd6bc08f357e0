#!/usr/bin/env python3
"""Run the five bundled experiment configs and summarize the outputs.

Each config in configs/ drives one CLI experiment; results land in outputs/
as a CSV plus a .meta.json sidecar. The two Monte-Carlo runs (fig2, fig3)
default to 2e4 trials and dominate the runtime (a minute or two together);
pass --trials to shrink them for a smoke run.

Usage:
    python3 scripts/reproduce_figures.py [--only fig2 fig3] [--trials N]
"""

import argparse
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from sinrdist.cli import main as cli_main, sidecar_path  # noqa: E402

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")
# sidecar keys worth echoing per experiment kind
SUMMARY_KEYS = ("count", "ks_distance", "sinr_limit_db", "mean_interferers")


def run_one(name: str, trials, workers) -> int:
    config_path = ROOT / "configs" / f"{name}.json"
    config = json.loads(config_path.read_text())
    out = ROOT / config["output_path"]
    out.parent.mkdir(parents=True, exist_ok=True)
    argv = [config["experiment"], "--config", str(config_path), "--out", str(out)]
    if trials is not None and "sim" in config and "trials" in config["sim"]:
        argv += ["--trials", str(trials)]
    if workers is not None:
        argv += ["--workers", str(workers)]
    code = cli_main(argv)
    if code != 0:
        print(f"{name}: FAILED with exit code {code}", file=sys.stderr)
        return code
    meta = json.loads(sidecar_path(out).read_text())
    notes = ", ".join(
        f"{key}={meta[key]:.4g}" if isinstance(meta.get(key), float) else f"{key}={meta[key]}"
        for key in SUMMARY_KEYS
        if key in meta
    )
    print(f"{name}: {out.relative_to(ROOT)}" + (f" ({notes})" if notes else ""))
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--only", nargs="+", choices=FIGURES, help="subset of figures")
    parser.add_argument("--trials", type=int, help="override Monte-Carlo trial counts")
    parser.add_argument("--workers", type=int, help="thread count for simulations")
    args = parser.parse_args()
    for name in args.only or FIGURES:
        code = run_one(name, args.trials, args.workers)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
