#!/usr/bin/env python3
"""Regenerate the frozen golden outputs for the bundled three-slit scenario.

Run only when output behaviour changes deliberately, then review the diff:

    python3 scripts/regen_goldens.py
"""

import sys
from pathlib import Path

from duality_lab.cli import run_scenario

REPO = Path(__file__).resolve().parents[1]


def main() -> int:
    scenario = REPO / "scenarios" / "three_slit.json"
    out = REPO / "tests" / "golden" / "three_slit"
    out.mkdir(parents=True, exist_ok=True)
    status = run_scenario(scenario, out)
    if status != 0:
        print(f"scenario run failed with status {status}", file=sys.stderr)
        return status
    for name in ("pattern.csv", "report.json", "convergence.json"):
        print(f"wrote {out / name}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
