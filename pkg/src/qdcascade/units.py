"""Unit system and conversions.

All internal frequencies, rates and detunings are angular and carried in
ns^-1 with hbar = 1; energies quoted in ueV/meV are converted on ingestion
via omega = E / hbar.  The phonon coupling alpha is carried in ns^2
(0.03 ps^2 = 3e-8 ns^2).  Times are ns, temperatures K.
"""

from __future__ import annotations

from .exceptions import ConfigError

HBAR_UEV_NS = 0.65821195     # ueV * ns
KB_UEV_PER_K = 86.17333      # ueV / K

PS2_TO_NS2 = 1e-6
PS_TO_NS = 1e-3


def uev_to_angular(energy_uev: float) -> float:
    """Convert an energy in ueV to an angular frequency in ns^-1."""
    return energy_uev / HBAR_UEV_NS


def angular_to_uev(omega_ns: float) -> float:
    """Convert an angular frequency in ns^-1 to an energy in ueV."""
    return omega_ns * HBAR_UEV_NS


def mev_to_angular(energy_mev: float) -> float:
    # same factor and association as the "meV" unit-suffix parse path
    return energy_mev * (1e3 / HBAR_UEV_NS)


# Per-kind unit tables: maps accepted unit suffix -> factor/converter to the
# internal unit.  The first entry is the default unit of plain numbers.
_FREQ_UNITS = {
    "ns^-1": 1.0,
    "1/ns": 1.0,
    "uev": 1.0 / HBAR_UEV_NS,
    "µev": 1.0 / HBAR_UEV_NS,
    "μev": 1.0 / HBAR_UEV_NS,
    "mev": 1e3 / HBAR_UEV_NS,
}
_TIME_UNITS = {"ns": 1.0, "ps": PS_TO_NS}
_PHONON_COUPLING_UNITS = {"ps^2": PS2_TO_NS2, "ns^2": 1.0}
_TEMPERATURE_UNITS = {"k": 1.0}

KIND_UNITS = {
    "frequency": _FREQ_UNITS,
    "time": _TIME_UNITS,
    "phonon_coupling": _PHONON_COUPLING_UNITS,
    "temperature": _TEMPERATURE_UNITS,
    "dimensionless": {"": 1.0},
}

# Default unit of a bare number per kind.  Note phonon_coupling defaults to
# ps^2 on input (the unit couplings are usually quoted in) while ModelParams
# stores ns^2.
KIND_DEFAULT = {
    "frequency": "ns^-1",
    "time": "ns",
    "phonon_coupling": "ps^2",
    "temperature": "k",
    "dimensionless": "",
}


def parse_quantity(value, kind: str) -> float:
    """Parse a config value into the internal unit for its kind.

    Accepts a plain number (interpreted in the kind's default unit) or a
    string of the form "<number> <unit>", e.g. "32.9 ueV" or "0.03 ps^2".
    """
    units = KIND_UNITS[kind]
    if isinstance(value, bool):
        raise ConfigError(f"expected a number for a {kind} value, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value) * units[KIND_DEFAULT[kind]]
    if isinstance(value, str):
        parts = value.split()
        try:
            number = float(parts[0])
        except (ValueError, IndexError):
            raise ConfigError(f"cannot parse quantity {value!r}") from None
        if len(parts) == 1:
            return number * units[KIND_DEFAULT[kind]]
        if len(parts) != 2:
            raise ConfigError(f"cannot parse quantity {value!r}")
        unit = parts[1].lower()
        if unit not in units:
            raise ConfigError(
                f"unknown unit {parts[1]!r} for a {kind} value "
                f"(accepted: {sorted(units)})"
            )
        return number * units[unit]
    raise ConfigError(f"expected a number or '<number> <unit>' string, got {value!r}")
