#!/usr/bin/env python3
"""Reproduce the main convergence-rate tables.

Runs the grid-refinement studies for the 1D periodic (upwind and central),
1D supersonic, 2D periodic, and 2D mixed-boundary cases and prints the
fitted rates.  Pass --quick for a shorter grid list.
"""

import argparse
import sys
import time

sys.path.insert(0, "src")

from advwave.cli import RunConfig, run_convergence  # noqa: E402

CASES = [
    ("1D upwind q=2", dict(problem="periodic1d", q=2, flux="sommerfeld",
                           w=0.5, c=1.0, T=0.4)),
    ("1D upwind q=3", dict(problem="periodic1d", q=3, flux="sommerfeld",
                           w=0.5, c=1.0, T=0.4)),
    ("1D central q=2", dict(problem="periodic1d", q=2, flux="central",
                            w=0.5, c=1.0, T=0.4)),
    ("1D central q=3", dict(problem="periodic1d", q=3, flux="central",
                            w=0.5, c=1.0, T=0.4)),
    ("1D sonic q=2", dict(problem="periodic1d", q=2, flux="central",
                          w=0.5, c=0.5, T=0.4)),
    ("1D supersonic q=3 s=2", dict(problem="periodic1d", q=3, s=2,
                                   flux="central", w=1.0, c=0.5, T=0.4)),
    ("2D central q=2", dict(problem="periodic2d", q=2, flux="central",
                            w=[0.5, 0.5], c=1.0, T=0.2)),
    ("2D central q=3", dict(problem="periodic2d", q=3, flux="central",
                            w=[0.5, 0.5], c=1.0, T=0.2,
                            n_list=[5, 7, 10, 14, 20, 28])),
    ("2D mixed BC q=2", dict(problem="mixed2d", q=2, flux="sommerfeld",
                             w=[0.5, 0.5], c=1.0, T=1.0,
                             n_list=[5, 7, 10, 14, 20])),
]

QUICK_GRIDS = {1: [10, 14, 20, 28, 40], 2: [5, 7, 10, 14]}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true",
                        help="use shorter grid lists")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    print(f"{'case':26s} {'rate_u':>8s} {'rate_v':>8s} {'finest err_u':>13s} {'secs':>6s}")
    for label, kw in CASES:
        cfg = RunConfig(**kw)
        if args.quick:
            cfg.n_list = QUICK_GRIDS[cfg.dim]
        t0 = time.time()
        rows, rate_u, rate_v, _ = run_convergence(cfg, workers=args.workers)
        print(f"{label:26s} {rate_u:8.3f} {rate_v:8.3f} {rows[-1][2]:13.3e} "
              f"{time.time() - t0:6.1f}")


if __name__ == "__main__":
    main()
