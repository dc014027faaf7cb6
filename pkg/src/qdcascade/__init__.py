"""Simulation engine for a cavity-assisted biexciton-cascade single-photon source.

The engine propagates the reduced density matrix of a four-level quantum dot
coupled to a lossy cavity mode under a time-convolutionless second-order
master equation in the polaron frame, including LA-phonon-induced dephasing,
and computes source figures of merit (emitted photon number,
indistinguishability, emission spectrum) from two-time correlation functions.
"""

__version__ = "0.1.0"

from .config import ModelParams, GridSpec, load_config, dephasing_rate
from .exceptions import ConfigError, NumericsError, QuadratureError
from .hilbert import HilbertSpace
from .phonon import PhononBath
from .solver import Trajectory, propagate
from .correlators import (
    CorrelationGrid,
    compute_correlations,
    emitted_photon_number,
    emission_spectrum,
    indistinguishability,
)

__all__ = [
    "ModelParams",
    "GridSpec",
    "load_config",
    "dephasing_rate",
    "ConfigError",
    "NumericsError",
    "QuadratureError",
    "HilbertSpace",
    "PhononBath",
    "Trajectory",
    "propagate",
    "CorrelationGrid",
    "compute_correlations",
    "emitted_photon_number",
    "emission_spectrum",
    "indistinguishability",
    "__version__",
]
