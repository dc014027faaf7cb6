"""Shared fixtures.

Fast unit/property tests use reduced truncations and short windows; the
acceptance module builds the full baseline artifacts once per session.
"""

import numpy as np
import pytest

from qdcascade import GridSpec, ModelParams, PhononBath


@pytest.fixture(scope="session")
def baseline_params():
    return ModelParams()


@pytest.fixture(scope="session")
def fast_bath_grid():
    """Reduced bath grids: ~10x faster, still accurate to ~1e-8."""
    return GridSpec(bath_n_tau=801, bath_n_omega=1201, bath_gl_points=400)


@pytest.fixture(scope="session")
def bath_5k(baseline_params, fast_bath_grid):
    return PhononBath.build(baseline_params, fast_bath_grid)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_density_matrix(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return m + m.conj().T
