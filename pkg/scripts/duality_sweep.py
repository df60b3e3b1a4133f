#!/usr/bin/env python3
"""Sweep random instances over n and report how close the two duality
relations come to their bounds.

    python3 scripts/duality_sweep.py --out out/sweep
"""

import argparse
from pathlib import Path

from duality_lab.cli import run_sweep

REPO = Path(__file__).resolve().parents[1]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--config", default=REPO / "scenarios" / "duality_sweep.json", type=Path
    )
    parser.add_argument("--out", default=Path("out/sweep"), type=Path)
    parser.add_argument("--seed", type=int, default=None, help="override the master seed")
    args = parser.parse_args()

    status = run_sweep(args.config, args.out, seed=args.seed)
    if status != 0:
        return status
    lines = (args.out / "sweep.csv").read_text().splitlines()
    print(f"{len(lines) - 2} instances -> {args.out / 'sweep.csv'}")
    print(lines[-1])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
