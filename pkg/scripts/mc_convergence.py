#!/usr/bin/env python3
"""Monte-Carlo convergence experiment: deviation from the analytic pattern
at the primary maximum as the ensemble grows.

    python3 scripts/mc_convergence.py --seed 4 --ladder 1000 10000 100000
"""

import argparse
import time

import numpy as np

import duality_lab as dl
from duality_lab.oracle import mc_pattern


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=4)
    parser.add_argument("--samples", type=int, default=4096)
    parser.add_argument(
        "--ladder", type=int, nargs="+", default=[1000, 10_000, 100_000],
        help="ensemble sizes to compare",
    )
    args = parser.parse_args()

    slits = dl.SlitArray(intensities=[1.0, 0.7, 0.4], spacing=50e-6)
    rng = np.random.default_rng(31)
    coh = dl.from_modes(dl.ModeDecomposition(np.abs(rng.standard_normal((3, 3)))))
    geom = dl.ScreenGeometry.over_fringes(slits, 500e-9, 1.0, samples=args.samples)

    analytic = dl.pattern(slits, coh, geom)
    peak = int(np.argmax(analytic.total))
    print(f"{'N':>9}  {'rel dev at peak':>16}  {'5/sqrt(N)':>10}  {'time [s]':>8}")
    for n_real in args.ladder:
        start = time.perf_counter()
        mc = mc_pattern(slits, coh, geom, n_real, seed=args.seed)
        elapsed = time.perf_counter() - start
        dev = abs(mc.total[peak] - analytic.total[peak]) / analytic.total[peak]
        print(f"{n_real:>9}  {dev:>16.6f}  {5/np.sqrt(n_real):>10.5f}  {elapsed:>8.2f}")


if __name__ == "__main__":
    main()
