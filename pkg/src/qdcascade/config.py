"""Validated model parameters, defaults, and the YAML configuration loader.

The built-in defaults reproduce the standard operating point of the source:
gamma_x = gamma_xx = 0.5 ns^-1, kappa = 25 ns^-1, gamma'_0 = 1 ns^-1,
g' = 50 ns^-1, Omega_l' = 5 g', Omega_p,max' = 2.5 g', g' tau_p = 3 pi,
alpha = 0.03 ps^2, omega_b = 0.9 meV, T = 5 K, n_max = 2.
An empty configuration file therefore runs the baseline simulation.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

import yaml

from . import units
from .exceptions import ConfigError

PULSE_SHAPES = ("sawtooth-rising", "sawtooth-falling", "gaussian")

#: Empirical linear temperature coefficient of the background pure-dephasing
#: rate, gamma'(T) = gamma'_0 + EMPIRICAL_DEPHASING_SLOPE * T (ns^-1/K).
EMPIRICAL_DEPHASING_SLOPE = 2.127

_BASE_G_PRIME = 50.0


@dataclass(frozen=True)
class ModelParams:
    """All physical rates, detunings, pulse shape and truncation for one run.

    Internal units: angular ns^-1 (hbar = 1) for every rate/frequency,
    ns for times, ns^2 for the phonon coupling, K for temperature.
    Instances are immutable after validation and safe to share across
    concurrent sweep workers.

    ``renormalize_inputs`` selects how the supplied couplings are read:
    False (default) means g_prime / omega_l_prime / omega_p_max_prime are the
    polaron-renormalized (primed) values used directly in the system
    Hamiltonian; True means they are bare values that get multiplied by the
    thermal displacement <B> of the phonon bath.
    """

    gamma_x: float = 0.5
    gamma_xx: float = 0.5
    gamma_prime_0: float = 1.0
    dephasing_slope: float = 0.0
    kappa: float = 25.0
    g_prime: float = _BASE_G_PRIME
    omega_l_prime: float = 5.0 * _BASE_G_PRIME
    omega_p_max_prime: float = 2.5 * _BASE_G_PRIME
    delta: float = 0.0
    delta_l: float = 0.0
    pulse_width: float = 3.0 * math.pi / _BASE_G_PRIME
    pulse_start: float = 0.0
    pulse_shape: str = "sawtooth-rising"
    alpha: float = 3e-8
    omega_b: float = units.mev_to_angular(0.9)
    temperature: float = 5.0
    n_max: int = 2
    phonons_enabled: bool = True
    renormalize_inputs: bool = False
    allow_nonzero_delta_l: bool = False
    omega_c: float = 0.0

    def __post_init__(self):
        for name in ("gamma_x", "gamma_xx", "gamma_prime_0", "kappa",
                     "g_prime", "omega_l_prime", "omega_p_max_prime",
                     "pulse_width", "alpha", "omega_b", "temperature",
                     "dephasing_slope"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ConfigError(f"{name} must be a finite nonnegative number, got {v}")
        if self.n_max < 1:
            raise ConfigError(f"n_max must be >= 1, got {self.n_max}")
        if self.pulse_shape not in PULSE_SHAPES:
            raise ConfigError(
                f"pulse_shape must be one of {PULSE_SHAPES}, got {self.pulse_shape!r}")
        if self.delta_l != 0.0 and not self.allow_nonzero_delta_l:
            raise ConfigError(
                "delta_l != 0 breaks the multi-photon resonance condition; "
                "set allow_nonzero_delta_l to override deliberately")

    def replace(self, **kwargs) -> "ModelParams":
        return dataclasses.replace(self, **kwargs)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    @property
    def pulse_end(self) -> float:
        return self.pulse_start + self.pulse_width

    def max_rabi(self) -> float:
        """Largest drive coupling, used for the polaron validity diagnostic."""
        return max(self.omega_l_prime, self.omega_p_max_prime, self.g_prime)

    def polaron_validity(self, mean_displacement: float) -> float:
        """(Omega/omega_b)^2 (1 - <B>)^4 at the largest Rabi frequency.

        The polaron master equation is perturbative in the drive-induced
        phonon fluctuations; values above ~0.1 leave its validity regime.
        """
        if self.omega_b == 0.0:
            return 0.0
        return (self.max_rabi() / self.omega_b) ** 2 * (1.0 - mean_displacement) ** 4


def dephasing_rate(params: ModelParams, temperature: float) -> float:
    """Background pure-dephasing rate gamma'(T) = gamma'_0 + slope * T."""
    return params.gamma_prime_0 + params.dephasing_slope * temperature


@dataclass(frozen=True)
class GridSpec:
    """Numerical grid settings, kept apart from the physics parameters.

    ``t_end`` of None means pulse end + 5 radiative lifetimes (5/gamma_x).
    ``output_dt`` is both the trajectory recording step and the coarse grid
    of the two-time correlation tables; ``dt`` is the RK4 step and must
    divide ``output_dt``.
    """

    dt: float = 2e-4
    output_dt: float = 5e-3
    t_end: float | None = None
    bath_tau_max: float = 0.01
    bath_n_tau: int = 2001
    bath_n_omega: int = 4001
    bath_omega_span: float = 5.0      # omega grid spans +- span * omega_b
    bath_gl_points: int = 800
    spectrum_omega_half_width: float = 450.0
    spectrum_n_omega: int = 1801

    def __post_init__(self):
        if self.dt <= 0 or self.output_dt <= 0:
            raise ConfigError("dt and output_dt must be positive")
        sub = self.output_dt / self.dt
        if abs(sub - round(sub)) > 1e-9 or round(sub) < 1:
            raise ConfigError("output_dt must be a positive integer multiple of dt")
        if self.bath_omega_span < 5.0:
            raise ConfigError("bath omega grid must span at least [-5, +5] omega_b")

    @property
    def substeps(self) -> int:
        return int(round(self.output_dt / self.dt))

    def resolve_t_end(self, params: ModelParams) -> float:
        if self.t_end is not None:
            return self.t_end
        lifetime = 1.0 / params.gamma_x if params.gamma_x > 0 else 4.0
        return params.pulse_end + 5.0 * lifetime

    def replace(self, **kwargs) -> "GridSpec":
        return dataclasses.replace(self, **kwargs)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


# --- configuration file loading -------------------------------------------
#
# Schema: nested sections of key/value pairs.  Every value is either a plain
# number in the documented default unit or a "<number> <unit>" string.
# section -> key -> (ModelParams field, unit kind)
_SCHEMA = {
    "qd": {
        "gamma_x": ("gamma_x", "frequency"),
        "gamma_xx": ("gamma_xx", "frequency"),
        "gamma_prime_0": ("gamma_prime_0", "frequency"),
        "dephasing_slope": ("dephasing_slope", "frequency"),   # per K
    },
    "cavity": {
        "kappa": ("kappa", "frequency"),
        "g_prime": ("g_prime", "frequency"),
    },
    "drive": {
        "omega_l_prime": ("omega_l_prime", "frequency"),
        "omega_p_max_prime": ("omega_p_max_prime", "frequency"),
        "delta": ("delta", "frequency"),
        "delta_l": ("delta_l", "frequency"),
        "pulse_width": ("pulse_width", "time"),
        "pulse_start": ("pulse_start", "time"),
        "pulse_shape": ("pulse_shape", None),
        "allow_nonzero_delta_l": ("allow_nonzero_delta_l", None),
    },
    "phonon": {
        "alpha": ("alpha", "phonon_coupling"),
        "omega_b": ("omega_b", "frequency"),
        "temperature": ("temperature", "temperature"),
        "enabled": ("phonons_enabled", None),
        "renormalize_inputs": ("renormalize_inputs", None),
    },
    "numerics": {
        "n_max": ("n_max", None),
    },
    "spectrum": {
        "omega_c": ("omega_c", "frequency"),
    },
}

def params_from_mapping(data: dict) -> ModelParams:
    """Build ModelParams from a nested section mapping, rejecting unknown keys."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("configuration root must be a mapping of sections")
    kwargs = {}
    for section, content in data.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown configuration section {section!r}")
        if content is None:
            continue
        if not isinstance(content, dict):
            raise ConfigError(f"section {section!r} must be a mapping")
        for key, value in content.items():
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {section}.{key}")
            field, kind = _SCHEMA[section][key]
            if kind is None:
                kwargs[field] = _parse_plain(section, key, field, value)
            else:
                kwargs[field] = units.parse_quantity(value, kind)
    return ModelParams(**kwargs)


def _parse_plain(section, key, field, value):
    if field == "pulse_shape":
        if not isinstance(value, str):
            raise ConfigError(f"{section}.{key} must be a string")
        return value
    if field == "n_max":
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"{section}.{key} must be an integer")
        return value
    if not isinstance(value, bool):
        raise ConfigError(f"{section}.{key} must be a boolean")
    return value


def load_config(path) -> ModelParams:
    """Load and validate a YAML configuration file.

    An empty file yields the full baseline parameter set.  Unknown sections
    or keys are rejected rather than silently ignored.
    """
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return params_from_mapping(data)
