"""Phonon bath: spectral density, phase function, Green functions, transforms.

Derived expectations are frozen from closed forms evaluated here (Gaussian
moments of the spectral density), never from the code paths under test.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from qdcascade import GridSpec, ModelParams, PhononBath, QuadratureError
from qdcascade.phonon import (build_bath, half_fourier, phase_function,
                              polaron_shift, spectral_density)

ALPHA = 3e-8          # ns^2
OMEGA_B = 1367.4      # ns^-1


class TestSpectralDensity:
    def test_zero_at_origin(self):
        assert spectral_density(0.0, ALPHA, OMEGA_B) == 0.0

    def test_peak_position_matches_analytic_stationary_point(self):
        # d/domega [w^3 exp(-w^2/2wb^2)] = 0  =>  w* = sqrt(3) wb
        grid = np.linspace(0.0, 5 * OMEGA_B, 200001)
        numeric_argmax = grid[np.argmax(spectral_density(grid, ALPHA, OMEGA_B))]
        assert numeric_argmax == pytest.approx(math.sqrt(3) * OMEGA_B, rel=1e-4)

    def test_value_at_cutoff(self):
        expected = ALPHA * OMEGA_B**3 * math.exp(-0.5)   # ~46.5 ns^-1
        assert spectral_density(OMEGA_B, ALPHA, OMEGA_B) == pytest.approx(expected)
        assert expected == pytest.approx(46.5, rel=1e-2)


class TestPhaseFunction:
    def test_zero_coupling(self):
        assert phase_function(0.3e-3, 0.0, OMEGA_B, 5.0) == 0.0

    def test_phi0_at_zero_temperature_closed_form(self):
        # int_0^inf alpha w exp(-w^2/2wb^2) dw = alpha wb^2
        phi0 = phase_function(0.0, ALPHA, OMEGA_B, 0.0)
        assert phi0.real == pytest.approx(ALPHA * OMEGA_B**2, rel=1e-8)
        assert phi0.imag == 0.0
        assert phi0.real == pytest.approx(0.0561, abs=2e-4)
        assert math.exp(-phi0.real / 2) == pytest.approx(0.972, abs=1e-3)

    def test_displacement_at_5k(self, bath_5k):
        assert bath_5k.mean_displacement == pytest.approx(0.96, abs=0.01)

    def test_imaginary_part_temperature_independent(self):
        # the -i sin term carries no thermal factor; emission-only character
        # at T = 0 means Im phi <= 0 for tau >= 0
        for tau in (1e-4, 5e-4, 2e-3):
            cold = phase_function(tau, ALPHA, OMEGA_B, 0.0)
            warm = phase_function(tau, ALPHA, OMEGA_B, 20.0)
            assert cold.imag == pytest.approx(warm.imag, abs=1e-10)
            assert cold.imag <= 0.0

    def test_displacement_monotone_in_temperature_and_coupling(self):
        temps = [0.0, 5.0, 10.0, 20.0, 40.0]
        b_03 = [math.exp(-phase_function(0.0, 3e-8, OMEGA_B, t).real / 2)
                for t in temps]
        b_06 = [math.exp(-phase_function(0.0, 6e-8, OMEGA_B, t).real / 2)
                for t in temps]
        assert all(b_03[i] > b_03[i + 1] for i in range(len(temps) - 1))
        assert all(b_06[i] > b_06[i + 1] for i in range(len(temps) - 1))
        assert all(weak > strong for weak, strong in zip(b_03, b_06))
        assert all(0.0 < b <= 1.0 for b in b_03 + b_06)


class TestPolaronShift:
    def test_zero_coupling(self):
        assert polaron_shift(0.0, OMEGA_B) == 0.0

    def test_closed_form_gaussian_moment(self):
        # int J/w dw = alpha sqrt(pi/2) wb^3 ~ 96.1 ns^-1 (~63 ueV)
        expected = ALPHA * math.sqrt(math.pi / 2) * OMEGA_B**3
        assert polaron_shift(ALPHA, OMEGA_B) == pytest.approx(expected, rel=1e-8)
        assert expected == pytest.approx(96.1, abs=0.2)

    def test_linear_in_coupling(self):
        assert polaron_shift(2 * ALPHA, OMEGA_B) == pytest.approx(
            2 * polaron_shift(ALPHA, OMEGA_B), rel=1e-10)


class TestGreenFunctions:
    def test_long_time_decay(self, bath_5k):
        assert abs(bath_5k.gg_table[-1]) < 1e-12 * abs(bath_5k.gg_table[0])
        assert abs(bath_5k.gu_table[-1]) < 1e-12 * abs(bath_5k.gu_table[0])

    def test_value_at_origin(self, bath_5k):
        g_g0 = bath_5k.gg_table[0]
        phi0 = bath_5k.phi0
        expected = bath_5k.mean_displacement**2 * (math.cosh(phi0) - 1.0)
        assert g_g0.real == pytest.approx(expected, rel=1e-12)
        assert g_g0.real > 0 and abs(g_g0.imag) < 1e-15

    def test_hyperbolic_identity_every_tau(self, bath_5k):
        b2 = bath_5k.mean_displacement**2
        lhs = (bath_5k.gg_table + b2) ** 2 - bath_5k.gu_table**2
        assert np.max(np.abs(lhs - b2**2)) < 1e-12 * b2**2

    def test_green_interpolation_accessor(self, bath_5k):
        gg, gu = bath_5k.green(bath_5k.tau_grid[13])
        assert gg == pytest.approx(bath_5k.gg_table[13], rel=1e-12)
        assert gu == pytest.approx(bath_5k.gu_table[13], rel=1e-12)


class TestHalfFourier:
    def test_zero_coupling_transforms_vanish(self, fast_bath_grid):
        bath = build_bath(0.0, OMEGA_B, 5.0, fast_bath_grid)
        assert np.all(bath.gamma_g_table == 0)
        assert np.all(bath.gamma_u_table == 0)
        assert bath.mean_displacement == 1.0

    def test_low_temperature_asymmetry(self, bath_5k):
        g_plus, _ = bath_5k.gamma_at(OMEGA_B)
        g_minus, _ = bath_5k.gamma_at(-OMEGA_B)
        assert g_plus.real > g_minus.real
        u_plus = bath_5k.gamma_u(OMEGA_B)
        u_minus = bath_5k.gamma_u(-OMEGA_B)
        assert u_plus.real > u_minus.real

    def test_trapezoid_against_adaptive_quadrature(self, bath_5k):
        # independent scheme: adaptive quadrature over cubic splines of G_m
        re_spl = CubicSpline(bath_5k.tau_grid, bath_5k.gu_table.real)
        im_spl = CubicSpline(bath_5k.tau_grid, bath_5k.gu_table.imag)
        t_max = bath_5k.tau_grid[-1]
        for omega in (-2000.0, -300.0, 0.0, 450.0, 1800.0):
            re, _ = quad(lambda t: re_spl(t) * math.cos(omega * t)
                         - im_spl(t) * math.sin(omega * t),
                         0.0, t_max, limit=400)
            im, _ = quad(lambda t: re_spl(t) * math.sin(omega * t)
                         + im_spl(t) * math.cos(omega * t),
                         0.0, t_max, limit=400)
            table_val = bath_5k.gamma_u(omega)
            scale = abs(table_val) + 1e-12
            assert abs(table_val - (re + 1j * im)) / scale < 1e-6

    def test_interpolation_error_by_grid_refinement(self, baseline_params,
                                                    fast_bath_grid):
        coarse = build_bath(ALPHA, OMEGA_B, 5.0, fast_bath_grid)
        fine = build_bath(ALPHA, OMEGA_B, 5.0,
                          fast_bath_grid.replace(bath_n_omega=4801))
        probe = np.linspace(-3000.0, 3000.0, 997)
        vals_coarse = coarse.gamma_g(probe)
        vals_fine = fine.gamma_g(probe)
        scale = np.max(np.abs(vals_fine))
        assert np.max(np.abs(vals_coarse - vals_fine)) < 1e-6 * scale

    def test_out_of_range_rejected(self, bath_5k):
        with pytest.raises(QuadratureError):
            bath_5k.gamma_at(100 * OMEGA_B)

    def test_insufficient_decay_raises(self, fast_bath_grid):
        # a 0.5 ns^-1 cutoff gives ~ns bath memory, far beyond the window
        with pytest.raises(QuadratureError, match="decay"):
            build_bath(1e-4, 0.5, 5.0, fast_bath_grid)

    def test_nonconverged_grid_quadrature_raises(self):
        with pytest.raises(QuadratureError, match="converge"):
            build_bath(ALPHA, OMEGA_B, 5.0, GridSpec(bath_gl_points=4,
                                                     bath_n_tau=101))


class TestBathBuild:
    def test_build_from_params(self, fast_bath_grid):
        bath = PhononBath.build(ModelParams(), fast_bath_grid)
        assert bath.temperature == 5.0
        assert bath.alpha == pytest.approx(3e-8)
        assert bath.polaron_shift == pytest.approx(
            bath.alpha * math.sqrt(math.pi / 2) * bath.omega_b**3, rel=1e-8)

    def test_half_fourier_helper_matches_tables(self, bath_5k):
        recomputed = half_fourier(bath_5k.tau_grid, bath_5k.gg_table,
                                  bath_5k.omega_grid[:10])
        assert np.allclose(recomputed, bath_5k.gamma_g_table[:10], rtol=1e-12)
