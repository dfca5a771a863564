#!/usr/bin/env python3
"""Sweep the demand-certainty parameter and tabulate how the equilibrium
price distribution tightens: support, mean, std, and CV at each alpha.

Usage:
    python3 scripts/alpha_sweep.py [--c C] [--v V]
"""

import argparse
import sys

from pricedisp.equilibrium import MarketParams, MixedStrategy

ALPHAS = (0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99)


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--c", type=float, default=0.0)
    parser.add_argument("--v", type=float, default=1.0)
    args = parser.parse_args(argv)

    print(f"{'alpha':>6} {'p_lower':>9} {'p_upper':>9} {'mean':>9} {'std':>9} {'cv':>8}")
    for alpha in ALPHAS:
        strategy = MixedStrategy.from_params(MarketParams(args.c, args.v, alpha))
        mean, std, cv = strategy.moments()
        print(
            f"{alpha:6.2f} {strategy.p_lower:9.4f} {strategy.p_upper:9.4f}"
            f" {mean:9.4f} {std:9.4f} {cv:8.4f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(run())
