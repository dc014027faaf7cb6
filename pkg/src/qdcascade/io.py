"""CSV and manifest persistence with atomic writes.

All floats are written with repr-stable "%.12g" formatting so identical
inputs reproduce byte-identical files.  Schemas (documented in README):

  trajectory.csv    t,rho_x,rho_y,rho_xx,n_cav,p_e
  pulse.csv         t,omega_p
  pe.csv            t,p_e
  correlation.csv   t,tau,re_g1,im_g1,g2
  spectrum.csv      omega,s_c
  eigenenergies.csv t,lam1..lamD
  displacement.csv  alpha,temperature,mean_displacement,polaron_shift
  greens.csv        alpha,temperature,tau,re_gg,im_gg,re_gu,im_gu
  gammas.csv        alpha,temperature,omega,re_gamma_g,re_gamma_u
  points.csv        index,value,n_e,indistinguishability,status,error
  comparison.csv    value,n_e_fixed_bare,indist_fixed_bare,
                    n_e_fixed_primed,indist_fixed_primed
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def atomic_write_text(path, text: str):
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, columns, rows):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path, payload: dict):
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def write_trajectory(path, trajectory):
    cols = ("t", "rho_x", "rho_y", "rho_xx", "n_cav", "p_e")
    pops = trajectory.populations
    rows = zip(trajectory.t, pops["x"], pops["y"], pops["xx"],
               trajectory.n_cav, trajectory.p_e)
    write_csv(path, cols, rows)


def write_pulse(path, trajectory):
    write_csv(path, ("t", "omega_p"), zip(trajectory.t, trajectory.pulse))


def write_pe(path, trajectory):
    write_csv(path, ("t", "p_e"), zip(trajectory.t, trajectory.p_e))


def write_correlations(path, cgrid, stride: int = 4):
    """Strided triangular table export (full tables are ~10^6 rows)."""
    rows = []
    n = cgrid.n_rows
    for j in range(0, n, stride):
        m = n - j
        for i in range(0, m, stride):
            rows.append((cgrid.t[j], cgrid.tau[i],
                         cgrid.g1[j, i].real, cgrid.g1[j, i].imag,
                         cgrid.g2[j, i]))
    write_csv(path, ("t", "tau", "re_g1", "im_g1", "g2"), rows)


def write_spectrum(path, omega, s_c):
    write_csv(path, ("omega", "s_c"), zip(omega, s_c))


def write_eigenenergies(path, t_grid, curves):
    n_curves = curves.shape[1]
    cols = ("t",) + tuple(f"lam{i + 1}" for i in range(n_curves))
    rows = (np.concatenate([[t], row]) for t, row in zip(t_grid, curves))
    write_csv(path, cols, rows)
