"""CSV input schemas and validated loading.

Schema violations (missing file, empty table, missing column) raise
RecipeError before any output is produced.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


class RecipeError(ValueError):
    """Input does not match the documented CSV schema."""


# filename -> required columns (extra columns are tolerated)
SCHEMAS = {
    "trajectory": ("t", "rho_x", "rho_y", "rho_xx", "n_cav", "p_e"),
    "pulse": ("t", "omega_p"),
    "points": ("index", "value", "n_e", "indistinguishability", "status",
               "error"),
    "comparison": ("value", "n_e_fixed_bare", "indist_fixed_bare",
                   "n_e_fixed_primed", "indist_fixed_primed"),
    "spectrum": ("omega", "s_c"),
    "displacement": ("alpha", "temperature", "mean_displacement",
                     "polaron_shift"),
    "greens": ("alpha", "temperature", "tau", "re_gg", "im_gg", "re_gu",
               "im_gu"),
    "gammas": ("alpha", "temperature", "omega", "re_gamma_g", "re_gamma_u"),
}


def load_table(path, kind: str, numeric_columns=None) -> dict:
    """Read a CSV into column arrays, enforcing the schema for ``kind``.

    ``numeric_columns`` defaults to all required columns; non-numeric cells
    in those columns become NaN (sweep rows may carry empty values for
    failed points).
    """
    path = Path(path)
    if not path.exists():
        raise RecipeError(f"missing input file {path}")
    required = SCHEMAS[kind]
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RecipeError(f"{path} is empty") from None
        rows = list(reader)
    missing = [c for c in required if c not in header]
    if missing:
        raise RecipeError(f"{path} lacks required columns {missing} "
                          f"(found {header})")
    if not rows:
        raise RecipeError(f"{path} has a header but no data rows")
    index = {c: header.index(c) for c in header}
    table = {}
    numeric = set(required if numeric_columns is None else numeric_columns)
    for col in header:
        cells = [row[index[col]] if index[col] < len(row) else "" for row in rows]
        if col in numeric:
            table[col] = np.array([_to_float(c) for c in cells])
        else:
            table[col] = np.array(cells, dtype=object)
    return table


def _to_float(cell: str) -> float:
    try:
        return float(cell)
    except (TypeError, ValueError):
        return float("nan")


def eigenenergy_table(path) -> tuple:
    """Load t,lam1..lamD (curve count inferred from the header)."""
    path = Path(path)
    if not path.exists():
        raise RecipeError(f"missing input file {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RecipeError(f"{path} is empty") from None
        rows = list(reader)
    if not rows:
        raise RecipeError(f"{path} has a header but no data rows")
    if header[0] != "t" or len(header) < 2 or \
            any(not c.startswith("lam") for c in header[1:]):
        raise RecipeError(f"{path} must have columns t,lam1..lamD, "
                          f"found {header}")
    data = np.array([[_to_float(c) for c in row] for row in rows])
    return data[:, 0], data[:, 1:]
