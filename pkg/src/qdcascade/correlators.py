"""Two-time cavity correlations and derived figures of merit.

The quantum regression theorem evolves operator-seeded matrices under the
same time-dependent generator as the density matrix: with
Lambda_1(t; 0) = a rho(t) and Lambda_2(t; 0) = a rho(t) a^dag,

    g1(t, tau) = <a^dag(t+tau) a(t)>        = Tr[a^dag Lambda_1(t; tau)],
    g2(t, tau) = <a^dag(t) a^dag(t+tau) a(t+tau) a(t)>
                                            = Tr[a^dag a Lambda_2(t; tau)].

Note the stored g1 ordering is <a^dag(t+tau) a(t)> (the one the spectrum
integral uses); the Hong-Ou-Mandel ordering <a^dag(t) a(t+tau)> is its
complex conjugate, so |g1|^2 is shared.

All rows evolve in lockstep as columns of one matrix through the cached
interval propagators, which keeps the O((T/dt)^2) two-time cost dominated
by dense matrix products.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import GridSpec, ModelParams
from .exceptions import NumericsError
from .hilbert import space
from .phonon import PhononBath
from .solver import IntervalPropagators, Trajectory, propagate

TAIL_FRACTION = 1e-4
G2_NEGATIVE_TOL = -1e-8


@dataclass(eq=False)
class CorrelationGrid:
    """Triangular two-time tables on the coarse output grid.

    Row j holds tau indices 0 .. n_rows-1-j (absolute time t_j + tau_i may
    not exceed the simulated window); entries outside the triangle are zero.
    ``n`` is the cavity occupation on the same t grid.
    """

    t: np.ndarray
    tau: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    n: np.ndarray
    params: ModelParams
    grid: GridSpec
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        return len(self.t)

    def row_length(self, j: int) -> int:
        return self.n_rows - j


def compute_correlations(params: ModelParams, bath: PhononBath | None = None,
                         grid: GridSpec = GridSpec(),
                         trajectory: Trajectory | None = None) -> CorrelationGrid:
    """Fill the g1/g2 triangle by evolving all rows in one batched wave."""
    if params.n_max < 2:
        warnings.warn(
            "n_max < 2 cannot represent two-photon events; g2 will be "
            "identically zero", stacklevel=2)
    if params.phonons_enabled and bath is None:
        bath = PhononBath.build(params, grid)
    if trajectory is None:
        trajectory = propagate(params, bath, grid)
    sp = space(params.n_max)
    d = sp.dim
    n_pts = trajectory.n_records
    props = IntervalPropagators(params, bath, grid, t_end=trajectory.t[-1])

    tr_g1 = sp.adag.T.reshape(-1)      # Tr[a^dag L] = vec(a^dag^T) . vec(L)
    tr_g2 = sp.number.T.reshape(-1)

    g1 = np.zeros((n_pts, n_pts), dtype=complex)
    g2 = np.zeros((n_pts, n_pts))
    wave = np.zeros((d * d, 2 * n_pts), dtype=complex)
    adag = sp.adag
    a = sp.a
    js_cache = np.arange(n_pts)
    for k in range(n_pts):
        rho_k = trajectory.rho[k]
        wave[:, 2 * k] = (a @ rho_k).reshape(-1)
        wave[:, 2 * k + 1] = (a @ rho_k @ adag).reshape(-1)
        active = wave[:, :2 * (k + 1)]
        js = js_cache[:k + 1]
        g1[js, k - js] = tr_g1 @ active[:, 0::2]
        g2[js, k - js] = (tr_g2 @ active[:, 1::2]).real
        if k < n_pts - 1:
            wave[:, :2 * (k + 1)] = props.at(k) @ active

    g2_min = float(g2.min())
    if g2_min < G2_NEGATIVE_TOL:
        warnings.warn(f"g2 developed negative values down to {g2_min:.2e}",
                      stacklevel=2)
    diag = {"g2_min": g2_min, "dt": props.dt, "substeps": props.substeps}
    return CorrelationGrid(t=trajectory.t.copy(), tau=trajectory.t.copy(),
                           g1=g1, g2=g2, n=trajectory.n_cav.copy(),
                           params=params, grid=grid, diagnostics=diag)


def regression_g1(trajectory: Trajectory, params: ModelParams,
                  bath: PhononBath | None = None,
                  grid: GridSpec = GridSpec()) -> np.ndarray:
    """g1 table <a^dag(t+tau) a(t)> from a stored trajectory."""
    return compute_correlations(params, bath, grid, trajectory).g1


def regression_g2(trajectory: Trajectory, params: ModelParams,
                  bath: PhononBath | None = None,
                  grid: GridSpec = GridSpec()) -> np.ndarray:
    """g2 table <a^dag(t) a^dag(t+tau) a(t+tau) a(t)> from a trajectory."""
    return compute_correlations(params, bath, grid, trajectory).g2


def _triangle_integrals(cgrid: CorrelationGrid):
    """2-D trapezoid of numerator and denominator of the HOM visibility."""
    n_pts = cgrid.n_rows
    dt = cgrid.t[1] - cgrid.t[0] if n_pts > 1 else 1.0
    num = 0.0
    den = 0.0
    n = cgrid.n
    for j in range(n_pts):
        m = n_pts - j
        if m < 2:
            continue
        w = np.ones(m)
        w[0] = 0.5
        w[-1] = 0.5
        wj = 0.5 if (j == 0 or j == n_pts - 1) else 1.0
        diff = cgrid.g2[j, :m] - np.abs(cgrid.g1[j, :m]) ** 2
        num += wj * float(w @ diff)
        den += wj * float(w @ (n[j] * n[j:j + m]))
    return num * dt * dt, den * dt * dt


def indistinguishability(cgrid: CorrelationGrid) -> float:
    """Hong-Ou-Mandel two-photon interference visibility, in [0, 1].

        I = 1/2 [ 1 - (iint (g2 - |g1|^2)) / (iint n(t) n(t+tau)) ],

    both integrals over 0 <= t <= T, 0 <= tau <= T - t by 2-D trapezoid.
    A perfect single photon gives exactly 1 (g2 = 0, |g1|^2 = n n), full
    dephasing with uncorrelated emission gives exactly 0.
    """
    if cgrid.n[-1] > TAIL_FRACTION * max(cgrid.n.max(), 1e-300):
        raise NumericsError(
            "correlation window does not cover the full emission "
            f"(n(t_end)/max n = {cgrid.n[-1] / cgrid.n.max():.2e})")
    num, den = _triangle_integrals(cgrid)
    if den <= 0.0:
        raise NumericsError(
            "no emission registered: the visibility denominator vanishes")
    return 0.5 * (1.0 - num / den)


def emitted_photon_number(trajectory: Trajectory):
    """N_e = int_0^inf kappa <a^dag a> dt and the running P_e(t) curve.

    Requires a decayed trajectory (n_cav < 1e-5 at the window end).
    """
    if trajectory.n_cav[-1] >= 1e-5:
        raise NumericsError(
            f"trajectory not decayed: n_cav(t_end) = {trajectory.n_cav[-1]:.2e}")
    return float(trajectory.p_e[-1]), trajectory.p_e


def emission_spectrum(cgrid: CorrelationGrid, omega_grid=None,
                      omega_c: float | None = None):
    """Cavity emission spectrum from the time-averaged g1.

        S_c(omega) = Re int_0^inf dtau e^{-i(omega-omega_c) tau}
                     int_0^inf dt <a^dag(t+tau) a(t)>,

    inner t integral first (trapezoid over the triangle rows), then the
    half-Fourier over tau.  Returns (omega_grid, s_c).
    """
    n_pts = cgrid.n_rows
    dt = cgrid.t[1] - cgrid.t[0]
    if omega_c is None:
        omega_c = cgrid.params.omega_c
    if omega_grid is None:
        hw = cgrid.grid.spectrum_omega_half_width
        omega_grid = omega_c + np.linspace(-hw, hw, cgrid.grid.spectrum_n_omega)
    omega_grid = np.asarray(omega_grid, dtype=float)

    # m(tau_i) = int dt g1(t, tau_i) over rows j = 0 .. n-1-i
    m = np.empty(n_pts, dtype=complex)
    for i in range(n_pts):
        rows = n_pts - i
        if rows < 2:
            m[i] = 0.0
            continue
        w = np.ones(rows)
        w[0] = 0.5
        w[-1] = 0.5
        m[i] = (w @ cgrid.g1[:rows, i]) * dt
    peak = np.max(np.abs(m))
    if peak > 0 and np.max(np.abs(m[-max(2, n_pts // 100):])) > TAIL_FRACTION * peak:
        raise NumericsError(
            "insufficient tau coverage: time-averaged g1 has not decayed "
            "at the end of the correlation window")

    w_tau = np.full(n_pts, dt)
    w_tau[0] *= 0.5
    w_tau[-1] *= 0.5
    phases = np.exp(-1j * np.outer(omega_grid - omega_c, cgrid.tau))
    s_c = (phases @ (w_tau * m)).real
    return omega_grid, s_c
