"""Parameter sweeps with per-point persistence and run manifests.

A sweep varies exactly one axis with otherwise identical settings.  Points
are independent jobs over immutable inputs; each point writes its artifacts
and a ``result.json`` marker atomically, so interrupted sweeps can resume.
Results are assembled in axis order regardless of worker count, keeping
outputs invariant to execution order.
"""

from __future__ import annotations

import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, io
from .config import EMPIRICAL_DEPHASING_SLOPE, GridSpec, ModelParams
from .correlators import (compute_correlations, emission_spectrum,
                          emitted_photon_number, indistinguishability)
from .exceptions import ConfigError
from .model import quasi_eigenenergies
from .phonon import PhononBath
from .solver import propagate

SWEEP_AXES = {
    "temperature": "temperature",
    "gamma_prime": "gamma_prime_0",
    "delta": "delta",
    "pulse_width": "pulse_width",
    "alpha": "alpha",
}

OUTPUTS = ("ne", "indistinguishability", "spectrum", "trajectory",
           "eigenenergies")


@dataclass(frozen=True)
class SweepSpec:
    """One sweep definition: the axis, its values, and fixed mode flags."""

    axis: str
    values: tuple
    phonons: bool = True
    renormalize_inputs: bool = False
    temp_dephasing: bool = False
    outputs: tuple = ("ne",)
    base: ModelParams = field(default_factory=ModelParams)
    grid: GridSpec = field(default_factory=GridSpec)

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(
                f"unknown sweep axis {self.axis!r}; choose from {sorted(SWEEP_AXES)}")
        vals = np.asarray(self.values, dtype=float)
        if len(vals) < 1:
            raise ConfigError("sweep needs at least one axis value")
        if len(vals) > 1:
            d = np.diff(vals)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise ConfigError("sweep axis values must be strictly monotone")
        for out in self.outputs:
            if out not in OUTPUTS:
                raise ConfigError(
                    f"unknown output {out!r}; choose from {OUTPUTS}")

    def point_params(self, value: float) -> ModelParams:
        slope = self.base.dephasing_slope
        if self.temp_dephasing:
            slope = slope if slope > 0 else EMPIRICAL_DEPHASING_SLOPE
        else:
            slope = 0.0
        return self.base.replace(
            **{SWEEP_AXES[self.axis]: value},
            phonons_enabled=self.phonons,
            renormalize_inputs=self.renormalize_inputs,
            dephasing_slope=slope,
        )

    def as_dict(self) -> dict:
        return {
            "axis": self.axis,
            "values": list(map(float, self.values)),
            "phonons": self.phonons,
            "renormalize_inputs": self.renormalize_inputs,
            "temp_dephasing": self.temp_dephasing,
            "outputs": list(self.outputs),
        }


def run_point(params: ModelParams, grid: GridSpec, outputs,
              point_dir: Path | None = None) -> dict:
    """Compute one parameter point and optionally persist its artifacts."""
    t0 = time.perf_counter()
    bath = PhononBath.build(params, grid) if params.phonons_enabled else None
    trajectory = propagate(params, bath, grid)
    n_e, _ = emitted_photon_number(trajectory)
    result = {"n_e": n_e, "indistinguishability": None}
    cgrid = None
    need_corr = ("indistinguishability" in outputs) or ("spectrum" in outputs)
    if need_corr:
        cgrid = compute_correlations(params, bath, grid, trajectory)
    if "indistinguishability" in outputs:
        result["indistinguishability"] = indistinguishability(cgrid)
    if point_dir is not None:
        point_dir = Path(point_dir)
        point_dir.mkdir(parents=True, exist_ok=True)
        if "trajectory" in outputs:
            io.write_trajectory(point_dir / "trajectory.csv", trajectory)
            io.write_pulse(point_dir / "pulse.csv", trajectory)
            io.write_pe(point_dir / "pe.csv", trajectory)
        if "spectrum" in outputs:
            omega, s_c = emission_spectrum(cgrid)
            io.write_spectrum(point_dir / "spectrum.csv", omega, s_c)
        if "eigenenergies" in outputs:
            t_grid = np.linspace(0.0, max(params.pulse_end * 1.5,
                                          params.pulse_end + 0.05), 400)
            curves = quasi_eigenenergies(t_grid, params, bath)
            io.write_eigenenergies(point_dir / "eigenenergies.csv",
                                   t_grid, curves)
    result["wall_time_s"] = time.perf_counter() - t0
    result["diagnostics"] = dict(trajectory.diagnostics)
    if bath is not None:
        result["diagnostics"]["mean_displacement"] = bath.mean_displacement
    return result


def _point_job(args):
    index, value, spec, out_dir, resume = args
    point_dir = Path(out_dir) / f"point_{index:03d}" if out_dir else None
    marker = point_dir / "result.json" if point_dir else None
    if resume and marker is not None and marker.exists():
        stored = io.read_json(marker)
        stored["resumed"] = True
        return index, stored
    row = {"index": index, "value": float(value), "status": "ok", "error": ""}
    try:
        params = spec.point_params(value)
        result = run_point(params, spec.grid, spec.outputs, point_dir)
        row.update(result)
        row["params"] = params.as_dict()
    except Exception as exc:   # record the failure, keep sweeping
        row["status"] = "error"
        row["error"] = f"{type(exc).__name__}: {exc}"
        row["traceback"] = traceback.format_exc()
    if marker is not None:
        io.write_json(marker, row)
    return index, row


def run_sweep(spec: SweepSpec, out_dir=None, workers: int = 1,
              resume: bool = False):
    """Run every point of a sweep; returns the ordered list of row dicts.

    Writes ``points.csv`` and ``manifest.json`` under ``out_dir`` plus one
    subdirectory per point.  Per-point failures are recorded in the rows and
    do not abort the sweep.
    """
    jobs = [(i, v, spec, str(out_dir) if out_dir else None, resume)
            for i, v in enumerate(spec.values)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(_point_job, jobs))
    else:
        results = dict(map(_point_job, jobs))
    rows = [results[i] for i in range(len(jobs))]

    if out_dir is not None:
        out_dir = Path(out_dir)
        io.write_csv(
            out_dir / "points.csv",
            ("index", "value", "n_e", "indistinguishability", "status", "error"),
            ((r["index"], r["value"], r.get("n_e"),
              r.get("indistinguishability"), r["status"], r["error"])
             for r in rows))
        manifest = {
            "engine_version": __version__,
            "spec": spec.as_dict(),
            "base_params": spec.base.as_dict(),
            "grid": spec.grid.as_dict(),
            "points": [
                {k: r.get(k) for k in ("index", "value", "status", "error",
                                       "params", "wall_time_s", "diagnostics")}
                for r in rows
            ],
        }
        io.write_json(out_dir / "manifest.json", manifest)
    return rows


def compare_renormalization(spec: SweepSpec, out_dir=None, workers: int = 1):
    """Paired temperature sweep: inputs held fixed as bare vs primed values.

    At <B> = 1 (alpha = 0) the two modes coincide identically; with phonons
    the difference grows with temperature.
    """
    if spec.axis != "temperature":
        raise ConfigError("renormalization comparison requires a temperature axis")
    rows_bare = run_sweep(
        SweepSpec(**{**_spec_kwargs(spec), "renormalize_inputs": True}),
        out_dir=Path(out_dir) / "fixed_bare" if out_dir else None,
        workers=workers)
    rows_primed = run_sweep(
        SweepSpec(**{**_spec_kwargs(spec), "renormalize_inputs": False}),
        out_dir=Path(out_dir) / "fixed_primed" if out_dir else None,
        workers=workers)
    paired = []
    for vb, vp in zip(rows_bare, rows_primed):
        paired.append({
            "value": vb["value"],
            "n_e_fixed_bare": vb.get("n_e"),
            "indist_fixed_bare": vb.get("indistinguishability"),
            "n_e_fixed_primed": vp.get("n_e"),
            "indist_fixed_primed": vp.get("indistinguishability"),
            "status": "ok" if (vb["status"] == "ok" and vp["status"] == "ok")
                      else "error",
        })
    if out_dir is not None:
        io.write_csv(
            Path(out_dir) / "comparison.csv",
            ("value", "n_e_fixed_bare", "indist_fixed_bare",
             "n_e_fixed_primed", "indist_fixed_primed"),
            ((p["value"], p["n_e_fixed_bare"], p["indist_fixed_bare"],
              p["n_e_fixed_primed"], p["indist_fixed_primed"])
             for p in paired))
    return paired


def _spec_kwargs(spec: SweepSpec) -> dict:
    return {
        "axis": spec.axis,
        "values": spec.values,
        "phonons": spec.phonons,
        "temp_dephasing": spec.temp_dephasing,
        "outputs": spec.outputs,
        "base": spec.base,
        "grid": spec.grid,
    }
