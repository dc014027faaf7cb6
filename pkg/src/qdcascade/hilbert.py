"""Operator algebra on the composite (4-level QD) x (truncated Fock) space.

Basis ordering is fixed: QD levels |g>, |X>, |Y>, |XX> (indices 0..3)
tensored with Fock states |0> .. |n_max>, flattened QD-major (composite
index = qd * (n_max + 1) + n).  Operators are dense complex matrices; at the
truncations used here (n_max <= 3, dim <= 16) sparse storage is pure
overhead.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .exceptions import NumericsError

# QD level indices
G, X, Y, XX = 0, 1, 2, 3
N_QD = 4


class HilbertSpace:
    """Cached basis operators on the composite space for one Fock truncation.

    The annihilator acts as a|n> = sqrt(n)|n-1> with a|0> = 0; the top Fock
    row is truncated (a^dag |n_max> = 0).  Operators are immutable values and
    safe to share.
    """

    def __init__(self, n_max: int):
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")
        self.n_max = n_max
        self.n_fock = n_max + 1
        self.dim = N_QD * self.n_fock
        self._eye_fock = np.eye(self.n_fock, dtype=complex)
        self._eye_qd = np.eye(N_QD, dtype=complex)
        a_f = np.diag(np.sqrt(np.arange(1, self.n_fock)), 1).astype(complex)
        self.a = np.kron(self._eye_qd, a_f)
        self.adag = self.a.conj().T
        self.number = self.adag @ self.a
        self.identity = np.eye(self.dim, dtype=complex)

    def dyad(self, i: int, j: int) -> np.ndarray:
        """QD transition operator |i><j| tensored with the Fock identity."""
        m = np.zeros((N_QD, N_QD), dtype=complex)
        m[i, j] = 1.0
        return np.kron(m, self._eye_fock)

    def projector(self, i: int) -> np.ndarray:
        return self.dyad(i, i)

    def qd_fock(self, qd: int, n: int) -> int:
        """Composite basis index of |qd> tensor |n>."""
        return qd * self.n_fock + n

    def ground_state(self) -> np.ndarray:
        """Initial density matrix |g,0><g,0| (QD ground, cavity vacuum)."""
        rho = np.zeros((self.dim, self.dim), dtype=complex)
        rho[0, 0] = 1.0
        return rho


@lru_cache(maxsize=8)
def space(n_max: int) -> HilbertSpace:
    return HilbertSpace(n_max)


def build_basis_operators(n_max: int) -> HilbertSpace:
    """Return the operator set {|i><j| x 1, a, a^dag, a^dag a} for n_max."""
    return space(n_max)


def expectation(rho: np.ndarray, op: np.ndarray) -> complex:
    """Tr(op rho); real within 1e-10 for Hermitian op and physical rho."""
    if rho.shape != op.shape:
        raise NumericsError(
            f"dimension mismatch: rho {rho.shape} vs op {op.shape}")
    return complex(np.trace(op @ rho))
