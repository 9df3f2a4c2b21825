#!/usr/bin/env python3
"""Run the five canonical model pipelines and write their JSON outputs.

Each run uses the full posterior protocol (50500 draws, 500 burn-in) with a
fixed seed, so the outputs are reproducible byte-for-byte.  Results land in
results/ next to this script unless --outdir is given.
"""

import argparse
import pathlib
import sys
import time

from fdci.cli import run_cli

RUNS = [
    ("linear_bvp.json", ["linear-bvp", "--m", "99"]),
    ("pendulum_uniform.json", ["pendulum", "--grid", "uniform"]),
    ("pendulum_piecewise.json", ["pendulum", "--grid", "piecewise"]),
    ("interior_layer_uniform.json", ["interior-layer", "--grid", "uniform"]),
    ("interior_layer_clustered.json", ["interior-layer", "--grid", "clustered", "--extra-points", "400"]),
    ("black_scholes_step10.json", ["black-scholes", "--step", "10"]),
    ("fixation_gen1000.json", ["fixation", "--generations", "1000", "--p0", "0.1"]),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default=str(pathlib.Path(__file__).resolve().parent.parent / "results"))
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--draws", type=int, default=50_500)
    args = ap.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for fname, cmd in RUNS:
        t0 = time.time()
        rc = run_cli(cmd + ["--seed", str(args.seed), "--draws", str(args.draws),
                           "--no-timestamp", "--out", str(outdir / fname)])
        status = "ok" if rc == 0 else f"FAILED rc={rc}"
        print(f"{fname:34s} {status}  ({time.time() - t0:.1f}s)")
        if rc != 0:
            return rc
    print(f"outputs in {outdir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
