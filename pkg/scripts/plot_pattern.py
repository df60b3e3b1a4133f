#!/usr/bin/env python3
"""Plot a pattern CSV (total intensity and incoherent reference).

    duality-lab pattern --config scenarios/three_slit.json --out out --scale-w
    python3 scripts/plot_pattern.py out/pattern.csv --scale-w -o out/pattern.png
"""

import argparse

import numpy as np

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError as exc:  # plotting extra, not a package dependency
    raise SystemExit("matplotlib is required: pip install 'duality-lab[plots]'") from exc


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", help="pattern CSV written by the engine or the oracle")
    parser.add_argument("-o", "--output", default="pattern.png")
    parser.add_argument(
        "--scale-w", action="store_true", help="x axis is in fringe-width units"
    )
    args = parser.parse_args()

    data = np.loadtxt(args.csv, delimiter=",", skiprows=1)
    x, total, incoherent = data.T
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, total, lw=1.0, label="total")
    ax.plot(x, incoherent, lw=1.0, ls="--", label="incoherent reference")
    ax.set_xlabel("x / w" if args.scale_w else "x [m]")
    ax.set_ylabel("intensity [arb.]")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
