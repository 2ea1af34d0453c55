#!/usr/bin/env python3
"""Reproduce the full set of figure datasets from the bundled recipe configs.

Each recipe in configs/ is driven through the command-line interface, so the
outputs (CSV tables plus JSON sidecars) are exactly what a user would get by
running the corresponding subcommands by hand.  Results land in
``results/<recipe>/``.

Usage::

    python3 scripts/reproduce_figures.py [--out results] [--only fig3,fig8]
"""

import argparse
import sys
import time
from pathlib import Path

from tristable.cli import main as cli

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"

# recipe -> list of CLI invocations (config path and output dir appended)
RECIPES = {
    # Case I stationary densities, analytic (both forms) vs Monte Carlo
    "fig3": [["spd", "--form", "both"], ["simulate"]],
    "fig4": [["spd", "--form", "both"], ["simulate"]],
    # amplitude density variant
    "fig5": [["spd", "--form", "closed"], ["simulate"]],
    # energy-dependent frequency vs constant-frequency baseline
    "fig6": [["spd", "--form", "closed", "--baseline"], ["simulate"]],
    # Case II with strong cross-correlation: the averaged diffusion is not
    # integrable there, so only the Monte Carlo density is produced
    "fig7": [["simulate"], ["psd", "--nperseg", "65536"]],
    # coherence resonance: quality factor versus additive noise intensity
    "fig8": [["cr-sweep", "--param", "d1",
              "--values", "0.001,0.005,0.01,0.02,0.05",
              "--nperseg", "65536"]],
    # Case II spectra versus cross-correlation strength
    "fig9": [["cr-sweep", "--param", "lambda", "--values", "0,0.45,0.9",
              "--nperseg", "65536"]],
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results", help="output root directory")
    ap.add_argument("--only", default=None,
                    help="comma-separated subset of recipes to run")
    args = ap.parse_args(argv)

    names = list(RECIPES) if args.only is None else args.only.split(",")
    status = 0
    for name in names:
        if name not in RECIPES:
            print(f"unknown recipe {name!r}; choices: {', '.join(RECIPES)}",
                  file=sys.stderr)
            return 2
        cfg = CONFIGS / f"{name}.json"
        out = Path(args.out) / name
        for argv_tail in RECIPES[name]:
            cmd = argv_tail + ["--config", str(cfg), "--out", str(out)]
            print(f"[{name}] tristable {' '.join(cmd)}")
            t0 = time.perf_counter()
            rc = cli(cmd)
            print(f"[{name}] exit {rc} in {time.perf_counter() - t0:.1f}s")
            if rc != 0:
                status = rc
    return status


if __name__ == "__main__":
    raise SystemExit(main())
