"""Golden CSV fixtures: small synthetic tables matching the documented schemas."""

import numpy as np
import pytest


def _write(path, header, rows):
    lines = [header] + [",".join(f"{v:.9g}" if isinstance(v, float) else str(v)
                                 for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def make_trajectory(path, scale=1.0):
    t = np.linspace(0.0, 2.0, 80)
    rows = [(float(ti), float(scale * 0.1 * np.exp(-ti)),
             float(scale * 0.8 * np.exp(-0.5 * ti) * ti),
             float(scale * 0.05 * np.exp(-2 * ti)),
             float(scale * 0.3 * ti * np.exp(-3 * ti)),
             float(scale * (1 - np.exp(-ti))))
            for ti in t]
    _write(path, "t,rho_x,rho_y,rho_xx,n_cav,p_e", rows)


def make_pulse(path):
    t = np.linspace(0.0, 2.0, 80)
    rows = [(float(ti), float(125.0 * ti / 0.2) if ti <= 0.2 else 0.0)
            for ti in t]
    _write(path, "t,omega_p", rows)


def make_points(path, x0=0.0, x1=10.0, level=0.9):
    xs = np.linspace(x0, x1, 9)
    rows = [(i, float(x), float(level * np.exp(-0.02 * x)),
             float(level * np.exp(-0.05 * x)), "ok", "")
            for i, x in enumerate(xs)]
    _write(path, "index,value,n_e,indistinguishability,status,error", rows)


def make_comparison(path):
    xs = np.linspace(4.0, 40.0, 7)
    rows = [(float(x), float(0.93 - 0.002 * x), float(0.9 - 0.004 * x),
             float(0.93 - 0.0021 * x), float(0.9 - 0.0042 * x)) for x in xs]
    _write(path, "value,n_e_fixed_bare,indist_fixed_bare,"
                 "n_e_fixed_primed,indist_fixed_primed", rows)


def make_spectrum(path, split=250.0):
    om = np.linspace(-450.0, 450.0, 301)
    s = (1.0 / (1 + (om / 12.5) ** 2)
         + 0.05 / (1 + ((om - split) / 12.5) ** 2)
         + 0.08 / (1 + ((om + split) / 12.5) ** 2))
    _write(path, "omega,s_c", [(float(o), float(v)) for o, v in zip(om, s)])


def make_eigenenergies(path):
    t = np.linspace(0.0, 0.3, 60)
    header = "t," + ",".join(f"lam{i+1}" for i in range(8))
    rows = []
    for ti in t:
        lam = [250 * np.sin(3 * ti) * (k - 3.5) / 3.5 for k in range(8)]
        rows.append((float(ti), *[float(v) for v in lam]))
    _write(path, header, rows)


def make_displacement(path):
    rows = []
    for alpha in (3e-8, 6e-8):
        for temp in np.linspace(2.0, 50.0, 13):
            b = float(np.exp(-alpha / 3e-8 * (0.03 + 0.002 * temp)))
            rows.append((alpha, float(temp), b, float(alpha * 3.2e9)))
    _write(path, "alpha,temperature,mean_displacement,polaron_shift", rows)


def make_greens(path):
    rows = []
    for temp in (5.0, 40.0):
        for tau in np.linspace(0.0, 0.005, 40):
            g = float(np.exp(-(tau / 7e-4) ** 2) * (1 + temp / 20))
            rows.append((3e-8, temp, float(tau), 1e-3 * g, -2e-4 * g,
                         5e-2 * g, -1e-2 * g))
    _write(path, "alpha,temperature,tau,re_gg,im_gg,re_gu,im_gu", rows)


def make_gammas(path):
    rows = []
    for temp in (5.0, 40.0):
        for om in np.linspace(-6000.0, 6000.0, 61):
            g = float(np.exp(-((om - 1000) / 1500) ** 2) * (1 + temp / 20))
            rows.append((3e-8, temp, float(om), 1e-6 * g, 2e-5 * g))
    _write(path, "alpha,temperature,omega,re_gamma_g,re_gamma_u", rows)


@pytest.fixture
def golden_dir(tmp_path):
    """Directory with golden inputs for every figure recipe."""
    d = tmp_path / "golden"
    d.mkdir()
    make_displacement(d / "displacement.csv")
    make_greens(d / "greens.csv")
    make_gammas(d / "gammas.csv")
    make_trajectory(d / "trajectory_phonons.csv", scale=0.9)
    make_trajectory(d / "trajectory_no_phonons.csv", scale=1.0)
    make_pulse(d / "pulse.csv")
    make_comparison(d / "comparison.csv")
    make_points(d / "points_phonons_const_dephasing.csv", 4.0, 40.0, 0.93)
    make_points(d / "points_temp_dephasing_only.csv", 4.0, 40.0, 0.96)
    make_points(d / "points_both.csv", 4.0, 40.0, 0.90)
    make_points(d / "points_phonons.csv", 0.0, 5.0, 0.93)
    make_points(d / "points_no_phonons.csv", 0.0, 5.0, 1.0)
    make_points(d / "points_resonant_phonons.csv", 0.1, 0.4, 0.93)
    make_points(d / "points_resonant_no_phonons.csv", 0.1, 0.4, 1.0)
    make_points(d / "points_detuned_phonons.csv", 0.1, 0.4, 0.88)
    make_points(d / "points_detuned_no_phonons.csv", 0.1, 0.4, 0.97)
    make_spectrum(d / "spectrum_resonant.csv")
    make_spectrum(d / "spectrum_detuned.csv", split=180.0)
    make_eigenenergies(d / "eigenenergies_resonant.csv")
    make_eigenenergies(d / "eigenenergies_detuned.csv")
    return d
