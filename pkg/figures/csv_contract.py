"""Loader for the sweep CSV contract shared by the figure scripts.

A sweep file carries ``#``-prefixed metadata lines, a fixed header row and
numeric rows.  The scripts do no physics: they refuse anything that does not
match the contract and plot the numbers as-is.
"""

from __future__ import annotations

import numpy as np

REQUIRED_COLUMNS = ("r_AS", "q", "R_C", "U_ee", "U_em", "U_me", "U_mm",
                    "U_total", "quad_error_max")


class ContractError(Exception):
    """CSV does not satisfy the sweep-output contract."""


def load_sweep_csv(path: str) -> dict:
    """Parse one sweep CSV into column arrays; raise ContractError on any
    deviation from the contract (missing columns, no data rows, bad values)."""
    metadata = []
    header = None
    rows = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                if line.startswith("#"):
                    metadata.append(line)
                elif header is None:
                    header = line.split(",")
                else:
                    rows.append(line.split(","))
    except OSError as exc:
        raise ContractError(f"{path}: cannot read ({exc})") from exc

    if header is None:
        raise ContractError(f"{path}: no header row")
    missing = [col for col in REQUIRED_COLUMNS if col not in header]
    if missing:
        raise ContractError(f"{path}: missing columns {missing}")
    if not rows:
        raise ContractError(f"{path}: no data rows")
    try:
        data = np.array([[float(v) for v in row] for row in rows])
    except ValueError as exc:
        raise ContractError(f"{path}: non-numeric data ({exc})") from exc
    if data.shape[1] != len(header):
        raise ContractError(f"{path}: ragged rows")

    columns = {name: data[:, i] for i, name in enumerate(header)}
    return {"path": path, "metadata": metadata, "columns": columns}


def constant_column_value(sweep: dict, name: str) -> float:
    """Value of a column that must be constant across the sweep."""
    values = sweep["columns"][name]
    if np.ptp(values) > 1e-12 * max(1.0, abs(values[0])):
        raise ContractError(
            f"{sweep['path']}: column {name} is not constant across the sweep")
    return float(values[0])
