"""System Hamiltonian, pulse envelope, drive operators and collapse set.

Everything is expressed in the frame rotating with the drives, with the
common detuning Delta = Delta_p = Delta_c on |X> and |XX>, the CW detuning
Delta_l = 0 (multi-photon resonance), and the polaron shift absorbed into
the detuning definitions.  The level scheme is a biexciton cascade: the
pump pulse couples |g> -> |X>, the CW field couples |X> -> |XX>, and the
cavity couples |XX> -> |Y> while creating a photon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .config import ModelParams, dephasing_rate
from .hilbert import G, X, XX, Y, HilbertSpace, space
from .phonon import PhononBath


@dataclass(frozen=True)
class PulseEnvelope:
    """Pump pulse envelope: peak value, width and start time.

    Sawtooth shapes vanish outside [t0, t0 + tau_p]; the rising ramp peaks
    exactly at the ramp end, the falling one at the start.  The optional
    Gaussian is centered at t0 + tau_p/2 with sigma = tau_p/6 (tails at the
    window edges ~1%, not truncated).
    """

    shape: str
    omega_p_max: float
    tau_p: float
    t0: float = 0.0

    def __call__(self, t):
        return pulse_value(t, self)

    @classmethod
    def from_params(cls, params: ModelParams) -> "PulseEnvelope":
        return cls(shape=params.pulse_shape,
                   omega_p_max=params.omega_p_max_prime,
                   tau_p=params.pulse_width,
                   t0=params.pulse_start)


def pulse_value(t, envelope: PulseEnvelope):
    """Instantaneous pulse Rabi frequency, vectorized over t."""
    t = np.asarray(t, dtype=float)
    x = (t - envelope.t0) / envelope.tau_p if envelope.tau_p > 0 else np.zeros_like(t)
    inside = (x >= 0.0) & (x <= 1.0)
    if envelope.shape == "sawtooth-rising":
        val = envelope.omega_p_max * x * inside
    elif envelope.shape == "sawtooth-falling":
        val = envelope.omega_p_max * (1.0 - x) * inside
    elif envelope.shape == "gaussian":
        sigma = envelope.tau_p / 6.0
        center = envelope.t0 + envelope.tau_p / 2.0
        val = envelope.omega_p_max * np.exp(-((t - center) ** 2) / (2 * sigma**2))
    else:
        raise ValueError(f"unknown pulse shape {envelope.shape!r}")
    return val if val.ndim else float(val)


def coupling_values(params: ModelParams, bath: PhononBath | None):
    """Resolve (primed, bare) coupling triples (omega_p_max, omega_l, g).

    With phonons enabled, the primed values enter the system Hamiltonian and
    the bare values the fluctuation drive operators; they differ by the
    thermal displacement <B>.  ``renormalize_inputs`` decides whether the
    configured numbers are bare (then primed = <B> * bare) or already primed
    (then bare = primed / <B>).  Without phonons both sets equal the inputs.
    """
    given = (params.omega_p_max_prime, params.omega_l_prime, params.g_prime)
    if not params.phonons_enabled or bath is None:
        return given, given
    b = bath.mean_displacement
    if params.renormalize_inputs:
        bare = given
        primed = tuple(b * v for v in given)
    else:
        primed = given
        bare = tuple(v / b for v in given)
    return primed, bare


def _coherent_part(space_: HilbertSpace, omega_p, omega_l, g):
    lower = (omega_p * space_.dyad(X, G)
             + omega_l * space_.dyad(XX, X)
             + g * space_.dyad(XX, Y) @ space_.a)
    return lower + lower.conj().T


def hamiltonian(t: float, params: ModelParams, bath: PhononBath | None = None,
                space_: HilbertSpace | None = None,
                explicit_polaron_shift: bool = False) -> np.ndarray:
    """Polaron-frame system Hamiltonian H'_S(t) / hbar (Hermitian).

    Diagonal part Delta (|X><X| + |XX><XX|); drive part built from the primed
    couplings.  ``explicit_polaron_shift`` re-enables the delta_P level
    shifts (-delta_P on X and Y, -2 delta_P on XX) that are by default
    absorbed into the detunings; this is a sensitivity-study debug knob.
    """
    sp = space_ or space(params.n_max)
    (omega_p_max, omega_l, g), _ = coupling_values(params, bath)
    envelope = PulseEnvelope.from_params(params)
    scale = pulse_value(t, envelope) / params.omega_p_max_prime \
        if params.omega_p_max_prime > 0 else 0.0
    h = params.delta * (sp.projector(X) + sp.projector(XX))
    if params.delta_l != 0.0:
        # general detuning bookkeeping: Delta_l enters |Y> and |XX> levels
        h = h + params.delta_l * (sp.projector(XX) + sp.projector(Y))
    h = h + _coherent_part(sp, scale * omega_p_max, omega_l, g)
    if explicit_polaron_shift and bath is not None:
        dp = bath.polaron_shift
        h = h - dp * (sp.projector(X) + sp.projector(Y)) \
              - 2.0 * dp * sp.projector(XX)
    return h


def drive_operators(t: float, params: ModelParams, bath: PhononBath | None = None,
                    space_: HilbertSpace | None = None):
    """Hermitian fluctuation drive operators (X_g, X_u), from bare couplings.

    X_g = Omega_p(t)|X><g| + Omega_l|XX><X| + g|XX><Y|a + H.c. and
    X_u = i(same lowering part) + H.c.; these multiply the even/odd phonon
    fluctuation operators in the polaron-frame interaction.
    """
    sp = space_ or space(params.n_max)
    _, (omega_p_max, omega_l, g) = coupling_values(params, bath)
    envelope = PulseEnvelope.from_params(params)
    scale = pulse_value(t, envelope) / params.omega_p_max_prime \
        if params.omega_p_max_prime > 0 else 0.0
    lower = (scale * omega_p_max * sp.dyad(X, G)
             + omega_l * sp.dyad(XX, X)
             + g * sp.dyad(XX, Y) @ sp.a)
    x_g = lower + lower.conj().T
    x_u = 1j * lower + (1j * lower).conj().T
    return x_g, x_u


def collapse_set(params: ModelParams, space_: HilbertSpace | None = None):
    """(operator, rate) pairs of the Lindblad channels.

    Radiative decay XX -> X, XX -> Y, X -> g, Y -> g; pure dephasing on the
    exciton states (doubled rate on the biexciton); cavity photon leakage.
    """
    sp = space_ or space(params.n_max)
    gp = dephasing_rate(params, params.temperature)
    return [
        (sp.dyad(X, XX), params.gamma_xx),
        (sp.dyad(Y, XX), params.gamma_xx),
        (sp.dyad(G, X), params.gamma_x),
        (sp.dyad(G, Y), params.gamma_x),
        (sp.projector(XX), 2.0 * gp),
        (sp.projector(X), gp),
        (sp.projector(Y), gp),
        (sp.a, params.kappa),
    ]


def collapse_operators(params: ModelParams, space_: HilbertSpace | None = None):
    """Rate-scaled collapse operators sqrt(rate) * O, dropping zero rates."""
    return [np.sqrt(rate) * op
            for op, rate in collapse_set(params, space_) if rate > 0.0]


def quasi_eigenenergies(t_grid, params: ModelParams,
                        bath: PhononBath | None = None,
                        n_max_trunc: int = 1) -> np.ndarray:
    """Instantaneous eigenvalues of H'_S(t) on a truncated Fock space.

    Returns an array of shape (len(t_grid), 4*(n_max_trunc+1)) with the
    eigenvalue curves continuity-sorted across t (nearest-match assignment),
    so avoided crossings trace out smooth branches.
    """
    sp = space(n_max_trunc)
    t_grid = np.asarray(t_grid, dtype=float)
    curves = np.empty((len(t_grid), sp.dim))
    prev = None
    for i, t in enumerate(t_grid):
        vals = np.linalg.eigvalsh(hamiltonian(t, params, bath, space_=sp))
        if prev is None:
            order = np.argsort(vals)
        else:
            cost = np.abs(vals[None, :] - prev[:, None])
            _, order = linear_sum_assignment(cost)
        curves[i] = vals[order]
        prev = curves[i]
    return curves
