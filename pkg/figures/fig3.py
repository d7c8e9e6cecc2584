#!/usr/bin/env python3
"""Potential against relative sphere size q = R/R_C, one curve per
atom-sphere separation.

Consumes q-sweep CSVs produced by ``cpsphere sweep`` (one file per
separation) and renders a deterministic image.  No physics happens here.

Usage: fig3.py --csv a.csv b.csv c.csv --out fig3.png
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from csv_contract import ContractError, constant_column_value, load_sweep_csv


def load_series(paths):
    """(label value, q array, U array) per file, sorted by separation."""
    series = []
    for path in paths:
        sweep = load_sweep_csv(path)
        separation = constant_column_value(sweep, "r_AS")
        cols = sweep["columns"]
        series.append((separation, cols["q"], cols["U_total"]))
    series.sort(key=lambda item: item[0])
    return series


def render(series, out_path):
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=160)
    for separation, q, u in series:
        ax.plot(q, u, label=f"separation = {separation:g}")
    ax.set_xlabel("relative sphere size q = R / R_C")
    ax.set_ylabel("potential (arbitrary units)")
    ax.axhline(0.0, color="0.7", lw=0.6)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--csv", nargs="+", required=True,
                        help="q-sweep CSVs, one per separation")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        series = load_series(args.csv)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    render(series, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
