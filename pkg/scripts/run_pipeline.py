#!/usr/bin/env python3
"""End-to-end desk-scale run: simulate a panel, compute dispersion metrics,
run all regression batteries, and write a markdown report.

Usage:
    python3 scripts/run_pipeline.py [--seed N] [--out DIR]
"""

import argparse
import sys
import time
from pathlib import Path

from pricedisp.cli import main as cli_main


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=Path, default=Path("out/pipeline"))
    args = parser.parse_args(argv)

    out = args.out
    panel = out / "sim" / "panel.csv"
    stages = [
        ["simulate", "--seed", str(args.seed), "--out", str(out / "sim")],
        ["metrics", "--input", str(panel), "--out", str(out / "metrics")],
        ["regress", "--input", str(panel), "--battery", "all", "--out", str(out / "regress")],
        ["report", "--input", str(panel), "--out", str(out)],
    ]
    for argv in stages:
        start = time.perf_counter()
        code = cli_main(argv)
        print(f"[{argv[0]}] exit {code} in {time.perf_counter() - start:.1f}s")
        if code != 0:
            return code
    print(f"outputs under {out}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
