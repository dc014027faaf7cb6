"""Hamiltonian builder, pulse envelope, drive operators, collapse set."""

import numpy as np
import pytest

from qdcascade import ModelParams
from qdcascade.hilbert import G, X, XX, Y, space
from qdcascade.model import (PulseEnvelope, collapse_operators, collapse_set,
                             coupling_values, drive_operators, hamiltonian,
                             pulse_value, quasi_eigenenergies)
from qdcascade.phonon import build_bath


@pytest.fixture(scope="module")
def params():
    return ModelParams(phonons_enabled=False)


class TestPulse:
    def test_rising_ramp(self):
        env = PulseEnvelope("sawtooth-rising", omega_p_max=125.0,
                            tau_p=0.2, t0=0.1)
        assert env(0.05) == 0.0
        assert env(0.1) == 0.0
        assert env(0.3) == pytest.approx(125.0)       # peak at the ramp end
        assert env(0.2) == pytest.approx(62.5)
        assert env(0.31) == 0.0

    def test_falling_ramp(self):
        env = PulseEnvelope("sawtooth-falling", omega_p_max=125.0,
                            tau_p=0.2, t0=0.0)
        assert env(0.0) == pytest.approx(125.0)       # peak at the start
        assert env(0.2) == pytest.approx(0.0)
        assert env(0.25) == 0.0

    def test_baseline_peak_value(self):
        p = ModelParams()
        env = PulseEnvelope.from_params(p)
        assert env(p.pulse_end) == pytest.approx(2.5 * 50.0)

    def test_triangle_area(self):
        env = PulseEnvelope("sawtooth-rising", omega_p_max=125.0,
                            tau_p=0.2, t0=0.0)
        t = np.linspace(-0.1, 0.4, 50001)
        integral = np.trapezoid(pulse_value(t, env), t)
        assert integral == pytest.approx(125.0 * 0.2 / 2, rel=1e-3)

    def test_envelope_nonnegative(self):
        t = np.linspace(-1, 1, 2001)
        for shape in ("sawtooth-rising", "sawtooth-falling", "gaussian"):
            env = PulseEnvelope(shape, 125.0, 0.2, 0.0)
            assert np.all(pulse_value(t, env) >= 0.0)

    def test_gaussian_center(self):
        env = PulseEnvelope("gaussian", 10.0, 0.6, t0=0.0)
        assert env(0.3) == pytest.approx(10.0)
        assert env(0.0) < 0.2


class TestHamiltonian:
    def test_hermitian_at_all_times(self, params):
        for t in (0.0, 0.05, 0.1, params.pulse_end, 1.0):
            h = hamiltonian(t, params)
            assert np.max(np.abs(h - h.conj().T)) < 1e-12

    def test_zero_couplings_diagonal(self):
        p = ModelParams(phonons_enabled=False, g_prime=0.0, omega_l_prime=0.0,
                        omega_p_max_prime=0.0, delta=7.0)
        h = hamiltonian(0.1, p)
        sp = space(p.n_max)
        expected = np.zeros(sp.dim)
        for n in range(sp.n_fock):
            expected[sp.qd_fock(X, n)] = 7.0
            expected[sp.qd_fock(XX, n)] = 7.0
        assert np.allclose(h, np.diag(expected))

    def test_autler_townes_splitting(self):
        # CW only: the X-XX pair dresses into eigenvalues +- omega_l'
        p = ModelParams(phonons_enabled=False, omega_p_max_prime=0.0,
                        g_prime=0.0, delta=0.0)
        vals = np.linalg.eigvalsh(hamiltonian(1.0, p))
        assert np.min(np.abs(vals - p.omega_l_prime)) < 1e-10
        assert np.min(np.abs(vals + p.omega_l_prime)) < 1e-10

    def test_zero_eigenvalue_multiplicity_outside_pulse(self):
        p = ModelParams(phonons_enabled=False, delta=0.0, n_max=1)
        vals = np.linalg.eigvalsh(hamiltonian(p.pulse_end + 1.0, p))
        assert np.sum(np.abs(vals) < 1e-9) >= 2

    def test_matches_bare_rotating_frame_without_phonons(self, params):
        # phonons off + no renormalization: couplings enter exactly as given
        sp = space(params.n_max)
        t = 0.1
        env = PulseEnvelope.from_params(params)
        lower = (pulse_value(t, env) * sp.dyad(X, G)
                 + params.omega_l_prime * sp.dyad(XX, X)
                 + params.g_prime * sp.dyad(XX, Y) @ sp.a)
        expected = lower + lower.conj().T
        assert np.allclose(hamiltonian(t, params), expected, atol=1e-13)

    def test_renormalization_modes(self, fast_bath_grid):
        p_primed = ModelParams()                      # inputs are primed
        p_bare = ModelParams(renormalize_inputs=True)  # inputs are bare
        bath = build_bath(p_primed.alpha, p_primed.omega_b,
                          p_primed.temperature, fast_bath_grid)
        b = bath.mean_displacement
        (op, ol, g), (op_b, ol_b, g_b) = coupling_values(p_primed, bath)
        assert (op, ol, g) == (125.0, 250.0, 50.0)
        assert op_b == pytest.approx(125.0 / b)
        (op2, ol2, g2), (bare2) = coupling_values(p_bare, bath)
        assert op2 == pytest.approx(125.0 * b)
        assert bare2 == (125.0, 250.0, 50.0)

    def test_explicit_polaron_shift_terms(self, fast_bath_grid):
        p = ModelParams()
        bath = build_bath(p.alpha, p.omega_b, p.temperature, fast_bath_grid)
        h_absorbed = hamiltonian(1.0, p, bath)
        h_explicit = hamiltonian(1.0, p, bath, explicit_polaron_shift=True)
        sp = space(p.n_max)
        diff = h_explicit - h_absorbed
        expected = (-bath.polaron_shift * (sp.projector(X) + sp.projector(Y))
                    - 2 * bath.polaron_shift * sp.projector(XX))
        assert np.allclose(diff, expected, atol=1e-10)


class TestDriveOperators:
    def test_hermiticity_and_positivity(self, params):
        for t in (0.0, 0.07, 0.3):
            x_g, x_u = drive_operators(t, params)
            assert np.max(np.abs(x_g - x_g.conj().T)) < 1e-12
            assert np.max(np.abs(x_u - x_u.conj().T)) < 1e-12
            vals = np.linalg.eigvalsh(x_g @ x_g + x_u @ x_u)
            scale = max(1.0, np.max(np.abs(vals)))
            assert np.min(vals) >= -1e-12 * scale

    def test_zero_drives(self):
        p = ModelParams(phonons_enabled=False, g_prime=0.0, omega_l_prime=0.0,
                        omega_p_max_prime=0.0)
        x_g, x_u = drive_operators(0.1, p)
        assert np.all(x_g == 0) and np.all(x_u == 0)

    def test_pump_matrix_element(self, params):
        sp = space(params.n_max)
        t = 0.12
        x_g, _ = drive_operators(t, params)
        env = PulseEnvelope.from_params(params)
        elem = x_g[sp.qd_fock(G, 0), sp.qd_fock(X, 0)]
        assert elem == pytest.approx(pulse_value(t, env))

    def test_bare_couplings_with_phonons(self, bath_5k):
        p = ModelParams()
        _, x_u = drive_operators(1.0, p, bath_5k)
        sp = space(p.n_max)
        elem = x_u[sp.qd_fock(XX, 0), sp.qd_fock(X, 0)]
        assert abs(elem) == pytest.approx(
            p.omega_l_prime / bath_5k.mean_displacement, rel=1e-12)


class TestCollapseSet:
    def test_exact_channel_set(self, params):
        pairs = collapse_set(params)
        assert len(pairs) == 8
        rates = [rate for _, rate in pairs]
        gp = params.gamma_prime_0
        assert rates == [params.gamma_xx, params.gamma_xx, params.gamma_x,
                         params.gamma_x, 2 * gp, gp, gp, params.kappa]

    def test_scaled_operators_drop_zero_rates(self):
        p = ModelParams(gamma_x=0.0, gamma_xx=0.0, gamma_prime_0=0.0,
                        phonons_enabled=False)
        ops = collapse_operators(p)
        assert len(ops) == 1    # only the cavity channel remains
        sp = space(p.n_max)
        assert np.allclose(ops[0], np.sqrt(p.kappa) * sp.a)


class TestQuasiEigenenergies:
    def test_count_and_shape(self, params):
        t_grid = np.linspace(0, 0.3, 40)
        curves = quasi_eigenenergies(t_grid, params, n_max_trunc=1)
        assert curves.shape == (40, 8)

    def test_zero_coupling_constant_lines(self):
        p = ModelParams(phonons_enabled=False, g_prime=0.0, omega_l_prime=0.0,
                        omega_p_max_prime=0.0, delta=11.0)
        curves = quasi_eigenenergies(np.linspace(0, 1, 7), p, n_max_trunc=1)
        assert np.allclose(curves, curves[0])
        assert sorted(np.round(curves[0], 9).tolist()) == [0, 0, 0, 0,
                                                           11, 11, 11, 11]

    def test_near_zero_branch_persists_through_pulse(self):
        # adiabatic transfer rides a branch far below the drive scales
        p = ModelParams(phonons_enabled=False)
        t_grid = np.linspace(0.0, p.pulse_end, 200)
        curves = quasi_eigenenergies(t_grid, p, n_max_trunc=1)
        smallest_branch = np.min(np.max(np.abs(curves), axis=0))
        assert smallest_branch < 0.5 * p.g_prime

    def test_continuity_sorting(self):
        # smooth branches on the drive scale, except across the abrupt
        # sawtooth cutoff where H(t) itself is discontinuous
        p = ModelParams(phonons_enabled=False)
        t_grid = np.linspace(0.0, 1.5 * p.pulse_end, 300)
        curves = quasi_eigenenergies(t_grid, p, n_max_trunc=1)
        jumps = np.abs(np.diff(curves, axis=0))
        crosses_cutoff = (t_grid[:-1] <= p.pulse_end) & (t_grid[1:] > p.pulse_end)
        assert np.max(jumps[~crosses_cutoff]) < 25.0
        assert np.max(jumps[crosses_cutoff]) > 25.0
