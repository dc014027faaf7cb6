"""Command-line interface.

Every configuration key has a mirroring override flag; values accept either
plain numbers in the documented default unit or "<number> <unit>" strings
("32.9 ueV", "0.03 ps^2").  Exit codes: 0 success, 1 configuration error,
2 numerical failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, io, units
from .config import GridSpec, ModelParams, load_config
from .correlators import (compute_correlations, emission_spectrum,
                          emitted_photon_number, indistinguishability)
from .exceptions import ConfigError, NumericsError
from .model import quasi_eigenenergies
from .phonon import PhononBath, build_bath, phase_function, polaron_shift
from .solver import propagate
from .sweep import SweepSpec, compare_renormalization, run_sweep

# flag name -> (ModelParams field, unit kind or special type)
_PARAM_OPTIONS = [
    ("--gamma-x", "gamma_x", "frequency"),
    ("--gamma-xx", "gamma_xx", "frequency"),
    ("--gamma-prime-0", "gamma_prime_0", "frequency"),
    ("--dephasing-slope", "dephasing_slope", "frequency"),
    ("--kappa", "kappa", "frequency"),
    ("--g-prime", "g_prime", "frequency"),
    ("--omega-l-prime", "omega_l_prime", "frequency"),
    ("--omega-p-max-prime", "omega_p_max_prime", "frequency"),
    ("--delta", "delta", "frequency"),
    ("--delta-l", "delta_l", "frequency"),
    ("--omega-b", "omega_b", "frequency"),
    ("--omega-c", "omega_c", "frequency"),
    ("--pulse-width", "pulse_width", "time"),
    ("--pulse-start", "pulse_start", "time"),
    ("--pulse-shape", "pulse_shape", "choice"),
    ("--alpha", "alpha", "phonon_coupling"),
    ("--temperature", "temperature", "temperature"),
    ("--n-max", "n_max", "int"),
]
_FLAG_OPTIONS = [
    ("--phonons/--no-phonons", "phonons_enabled"),
    ("--renormalize-inputs/--no-renormalize-inputs", "renormalize_inputs"),
    ("--allow-nonzero-delta-l/--forbid-nonzero-delta-l", "allow_nonzero_delta_l"),
]


def params_options(fn):
    for flag, fieldname, kind in reversed(_PARAM_OPTIONS):
        if kind == "int":
            fn = click.option(flag, fieldname, type=int, default=None,
                              help="override (integer)")(fn)
        elif kind == "choice":
            fn = click.option(flag, fieldname,
                              type=click.Choice(["sawtooth-rising",
                                                 "sawtooth-falling",
                                                 "gaussian"]),
                              default=None, help="override")(fn)
        else:
            fn = click.option(flag, fieldname, type=str, default=None,
                              help=f"override ({kind})")(fn)
    for flag, fieldname in reversed(_FLAG_OPTIONS):
        fn = click.option(flag, fieldname, default=None, help="override")(fn)
    fn = click.option("--config", "config_path",
                      type=click.Path(exists=True, dir_okay=False),
                      default=None, help="YAML configuration file")(fn)
    fn = click.option("--seeded-defaults", is_flag=True,
                      help="run from the built-in baseline parameters")(fn)
    fn = click.option("--dt", type=str, default=None, help="RK4 step (ns)")(fn)
    fn = click.option("--output-dt", type=str, default=None,
                      help="output/correlation grid step (ns)")(fn)
    fn = click.option("--t-end", type=str, default=None,
                      help="simulation window (ns)")(fn)
    return fn


def resolve(config_path, seeded_defaults, dt, output_dt, t_end, **overrides):
    """Build (ModelParams, GridSpec) from config file, defaults and flags."""
    if config_path:
        params = load_config(config_path)
    elif seeded_defaults:
        params = ModelParams()
    else:
        raise ConfigError("provide --config FILE or --seeded-defaults")
    kinds = {fieldname: kind for _, fieldname, kind in _PARAM_OPTIONS}
    updates = {}
    for fieldname, value in overrides.items():
        if value is None:
            continue
        kind = kinds.get(fieldname)
        if kind in (None, "int", "choice"):
            updates[fieldname] = value
        else:
            updates[fieldname] = units.parse_quantity(value, kind)
    if updates:
        params = params.replace(**updates)
    grid_updates = {}
    if dt is not None:
        grid_updates["dt"] = units.parse_quantity(dt, "time")
    if output_dt is not None:
        grid_updates["output_dt"] = units.parse_quantity(output_dt, "time")
    if t_end is not None:
        grid_updates["t_end"] = units.parse_quantity(t_end, "time")
    grid = GridSpec(**grid_updates)
    return params, grid


def _parse_list(text, kind):
    try:
        return tuple(units.parse_quantity(v.strip(), kind)
                     for v in text.split(",") if v.strip())
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"cannot parse list {text!r}: {exc}") from exc


@click.group()
@click.version_option(version=__version__)
def cli():
    """Biexciton-cascade single-photon source simulator."""


@cli.command()
@params_options
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              default=None, help="artifact directory")
@click.option("--indist/--no-indist", default=False,
              help="compute the two-time indistinguishability")
@click.option("--spectrum", "want_spectrum", is_flag=True,
              help="compute and export the emission spectrum")
def run(out_dir, indist, want_spectrum, config_path, seeded_defaults,
        dt, output_dt, t_end, **overrides):
    """Run a single simulation point and print its figures of merit."""
    params, grid = resolve(config_path, seeded_defaults, dt, output_dt,
                           t_end, **overrides)
    bath = PhononBath.build(params, grid) if params.phonons_enabled else None
    trajectory = propagate(params, bath, grid)
    n_e, _ = emitted_photon_number(trajectory)
    click.echo(f"N_e = {n_e:.4f}")
    summary = {"n_e": n_e, "engine_version": __version__,
               "params": params.as_dict(), "grid": grid.as_dict(),
               "diagnostics": trajectory.diagnostics}
    cgrid = None
    if indist or want_spectrum:
        cgrid = compute_correlations(params, bath, grid, trajectory)
    if indist:
        value = indistinguishability(cgrid)
        summary["indistinguishability"] = value
        click.echo(f"I   = {value:.4f}")
    if bath is not None:
        summary["mean_displacement"] = bath.mean_displacement
    if out_dir:
        out = Path(out_dir)
        io.write_trajectory(out / "trajectory.csv", trajectory)
        io.write_pulse(out / "pulse.csv", trajectory)
        io.write_pe(out / "pe.csv", trajectory)
        if want_spectrum:
            omega, s_c = emission_spectrum(cgrid)
            io.write_spectrum(out / "spectrum.csv", omega, s_c)
        if cgrid is not None:
            io.write_correlations(out / "correlation.csv", cgrid)
        io.write_json(out / "summary.json", summary)
        click.echo(f"artifacts written to {out}")


@cli.command()
@params_options
@click.option("--axis", required=True,
              type=click.Choice(["temperature", "gamma_prime", "delta",
                                 "pulse_width", "alpha"]))
@click.option("--values", required=True,
              help="comma-separated axis values (units per axis kind)")
@click.option("--temp-dephasing", is_flag=True,
              help="use the empirical linear gamma'(T)")
@click.option("--outputs", default="ne",
              help="comma list: ne,indistinguishability,spectrum,"
                   "trajectory,eigenenergies")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              required=True)
@click.option("--workers", type=int, default=1)
@click.option("--resume", is_flag=True, help="skip already-finished points")
@click.option("--compare-renormalization", "compare_renorm", is_flag=True,
              help="run the fixed-bare vs fixed-primed coupling comparison")
def sweep(axis, values, temp_dephasing, outputs, out_dir, workers, resume,
          compare_renorm, config_path, seeded_defaults, dt, output_dt, t_end,
          **overrides):
    """Sweep one parameter axis and persist per-point results."""
    params, grid = resolve(config_path, seeded_defaults, dt, output_dt,
                           t_end, **overrides)
    kind = {"temperature": "temperature", "gamma_prime": "frequency",
            "delta": "frequency", "pulse_width": "time",
            "alpha": "phonon_coupling"}[axis]
    spec = SweepSpec(
        axis=axis,
        values=_parse_list(values, kind),
        phonons=params.phonons_enabled,
        renormalize_inputs=params.renormalize_inputs,
        temp_dephasing=temp_dephasing,
        outputs=tuple(v.strip() for v in outputs.split(",") if v.strip()),
        base=params,
        grid=grid,
    )
    if compare_renorm:
        rows = compare_renormalization(spec, out_dir, workers=workers)
        ok = sum(1 for r in rows if r["status"] == "ok")
        click.echo(f"comparison finished: {ok}/{len(rows)} points ok -> {out_dir}")
        return
    rows = run_sweep(spec, out_dir, workers=workers, resume=resume)
    ok = sum(1 for r in rows if r["status"] == "ok")
    click.echo(f"sweep finished: {ok}/{len(rows)} points ok -> {out_dir}")


@cli.command()
@params_options
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default="spectrum.csv")
@click.option("--omega-half-width", type=str, default=None,
              help="spectrum half width around omega_c (frequency)")
@click.option("--omega-points", type=int, default=None)
def spectrum(out_path, omega_half_width, omega_points, config_path,
             seeded_defaults, dt, output_dt, t_end, **overrides):
    """Compute the cavity-emitted spectrum and write spectrum.csv."""
    params, grid = resolve(config_path, seeded_defaults, dt, output_dt,
                           t_end, **overrides)
    if omega_half_width is not None:
        grid = grid.replace(spectrum_omega_half_width=units.parse_quantity(
            omega_half_width, "frequency"))
    if omega_points is not None:
        grid = grid.replace(spectrum_n_omega=omega_points)
    bath = PhononBath.build(params, grid) if params.phonons_enabled else None
    cgrid = compute_correlations(params, bath, grid)
    omega, s_c = emission_spectrum(cgrid)
    io.write_spectrum(out_path, omega, s_c)
    click.echo(f"spectrum written to {out_path}")


@cli.command()
@params_options
@click.option("--t-max", type=str, default=None,
              help="time window for the curves (ns; default 1.5 pulse widths)")
@click.option("--points", type=int, default=400)
@click.option("--n-max-trunc", type=int, default=1,
              help="Fock truncation of the eigenvalue problem")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default="eigenenergies.csv")
def eigenenergies(t_max, points, n_max_trunc, out_path, config_path,
                  seeded_defaults, dt, output_dt, t_end, **overrides):
    """Export continuity-sorted quasi-eigenenergy curves of H'_S(t)."""
    params, grid = resolve(config_path, seeded_defaults, dt, output_dt,
                           t_end, **overrides)
    bath = PhononBath.build(params, grid) if params.phonons_enabled else None
    horizon = (units.parse_quantity(t_max, "time") if t_max is not None
               else max(params.pulse_end * 1.5, params.pulse_end + 0.05))
    t_grid = np.linspace(0.0, horizon, points)
    curves = quasi_eigenenergies(t_grid, params, bath, n_max_trunc=n_max_trunc)
    io.write_eigenenergies(out_path, t_grid, curves)
    click.echo(f"eigenenergies written to {out_path}")


@cli.command()
@params_options
@click.option("--alphas", default="0.03,0.06",
              help="comma list of couplings (default unit ps^2)")
@click.option("--temperatures", default="2,5,10,15,20,25,30,35,40,45,50",
              help="temperatures for the displacement curve (K)")
@click.option("--table-temperatures", default="5,40",
              help="temperatures at which to export G and Gamma tables (K)")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              required=True)
def bath(alphas, temperatures, table_temperatures, out_dir, config_path,
         seeded_defaults, dt, output_dt, t_end, **overrides):
    """Export phonon-bath tables: displacement, Green functions, transforms."""
    params, grid = resolve(config_path, seeded_defaults, dt, output_dt,
                           t_end, **overrides)
    alpha_list = _parse_list(alphas, "phonon_coupling")
    t_list = _parse_list(temperatures, "temperature")
    t_tables = _parse_list(table_temperatures, "temperature")
    out = Path(out_dir)
    disp_rows = []
    for alpha in alpha_list:
        shift = polaron_shift(alpha, params.omega_b)
        for temp in t_list:
            phi0 = phase_function(0.0, alpha, params.omega_b, temp).real
            disp_rows.append((alpha, temp, np.exp(-phi0 / 2.0), shift))
    io.write_csv(out / "displacement.csv",
                 ("alpha", "temperature", "mean_displacement", "polaron_shift"),
                 disp_rows)
    green_rows = []
    gamma_rows = []
    for alpha in alpha_list:
        for temp in t_tables:
            b = build_bath(alpha, params.omega_b, temp, grid)
            for tau, gg, gu in zip(b.tau_grid, b.gg_table, b.gu_table):
                green_rows.append((alpha, temp, tau, gg.real, gg.imag,
                                   gu.real, gu.imag))
            for om, gam_g, gam_u in zip(b.omega_grid, b.gamma_g_table,
                                        b.gamma_u_table):
                gamma_rows.append((alpha, temp, om, gam_g.real, gam_u.real))
    io.write_csv(out / "greens.csv",
                 ("alpha", "temperature", "tau", "re_gg", "im_gg",
                  "re_gu", "im_gu"), green_rows)
    io.write_csv(out / "gammas.csv",
                 ("alpha", "temperature", "omega", "re_gamma_g",
                  "re_gamma_u"), gamma_rows)
    click.echo(f"bath tables written to {out}")


@cli.command("validate-config")
@params_options
def validate_config(config_path, seeded_defaults, dt, output_dt, t_end,
                    **overrides):
    """Parse and validate the configuration, printing resolved parameters."""
    params, grid = resolve(config_path, seeded_defaults, dt, output_dt,
                           t_end, **overrides)
    for key, value in sorted(params.as_dict().items()):
        click.echo(f"{key} = {value}")
    click.echo(f"grid: dt={grid.dt} output_dt={grid.output_dt} "
               f"t_end={grid.resolve_t_end(params)}")
    click.echo("configuration ok")


def main(argv=None):
    """Entry point mapping exceptions to documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except (ConfigError, click.UsageError) as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(1)
    except NumericsError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(130)
    return 0


if __name__ == "__main__":
    main()
