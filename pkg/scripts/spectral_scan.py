#!/usr/bin/env python3
"""Scan the semidiscrete operator's spectral radius over n and q.

The estimates should scale like (c + |w|) q^2 / h, i.e. double under
n -> 2n and roughly quadruple under q -> 2q.
"""

import argparse
import sys

sys.path.insert(0, "src")

from advwave import (Discretization, FluxParams, build_mesh,  # noqa: E402
                     build_reference, spectral_radius_probe)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--w", type=float, default=0.5)
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--qs", type=int, nargs="+", default=[2, 3, 4])
    parser.add_argument("--ns", type=int, nargs="+", default=[10, 20, 40])
    args = parser.parse_args()

    print(f"{'q':>3s} {'n':>5s} {'radius':>12s} {'radius*h/q^2':>13s} {'conv':>5s}")
    for q in args.qs:
        ref = build_reference(q, q, dim=1)
        for n in args.ns:
            mesh = build_mesh(1, n, "periodic")
            disc = Discretization(mesh, ref, FluxParams.sommerfeld(),
                                  [args.w], args.c)
            radius, converged = spectral_radius_probe(disc)
            scaled = radius * mesh.h / q ** 2
            print(f"{q:3d} {n:5d} {radius:12.4e} {scaled:13.4e} "
                  f"{'yes' if converged else 'no':>5s}")


if __name__ == "__main__":
    main()
