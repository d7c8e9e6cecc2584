#!/usr/bin/env python3
"""Potential magnitude against atom-sphere separation, one curve per
relative sphere size q = R/R_C.

Consumes separation-sweep CSVs produced by ``cpsphere sweep`` (one file per
q) and renders a deterministic log-log image of |U|.

Usage: fig4.py --csv a.csv b.csv c.csv --out fig4.png
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from csv_contract import ContractError, constant_column_value, load_sweep_csv


def load_series(paths):
    """(label value, separation array, U array) per file, sorted by q."""
    series = []
    for path in paths:
        sweep = load_sweep_csv(path)
        q = constant_column_value(sweep, "q")
        cols = sweep["columns"]
        series.append((q, cols["r_AS"], cols["U_total"]))
    series.sort(key=lambda item: item[0])
    return series


def render(series, out_path):
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=160)
    for q, separation, u in series:
        ax.loglog(separation, np.abs(u), label=f"q = {q:g}")
    ax.set_xlabel("atom-sphere separation (reduced)")
    ax.set_ylabel("|potential| (arbitrary units)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--csv", nargs="+", required=True,
                        help="separation-sweep CSVs, one per q")
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
