"""Dense brute-force oracles built from explicit Kronecker products.

Everything here is intentionally independent of the package internals:
operators are assembled site by site with np.kron and evolved with
scipy matrix exponentials.  Bit layout matches the package convention
(site i at bit i, so site 0 is the *last* factor in the Kronecker chain).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import expm

SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
ID = np.eye(2, dtype=np.complex128)


def kron_chain(ops: list[np.ndarray]) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def site_op(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """Operator acting with `op` on `site`, identity elsewhere."""
    ops = [ID] * n
    ops[n - 1 - site] = op  # site 0 = least significant bit = last factor
    return kron_chain(ops)


def two_site_op(op1: np.ndarray, s1: int, op2: np.ndarray, s2: int, n: int) -> np.ndarray:
    ops = [ID] * n
    ops[n - 1 - s1] = op1
    ops[n - 1 - s2] = op2
    return kron_chain(ops)


def dense_hamiltonian(n: int, coupling: float, field: float, alpha: float = math.inf) -> np.ndarray:
    """H0 = -J sum c_ij sx_i sx_j - h sum sz_i, open chain."""
    h = np.zeros((2**n, 2**n), dtype=np.complex128)
    for i in range(n - 1):
        for j in range(i + 1, n):
            if math.isinf(alpha):
                if j != i + 1:
                    continue
                c = coupling
            else:
                c = coupling / abs(i - j) ** alpha
            h -= c * two_site_op(SX, i, SX, j, n)
    for i in range(n):
        h -= field * site_op(SZ, i, n)
    return h


def dense_kick(n: int, angles: np.ndarray) -> np.ndarray:
    """K = exp(-i sum_i phi_i sz_i) as a dense matrix."""
    gen = np.zeros((2**n, 2**n), dtype=np.complex128)
    for i in range(n):
        gen += angles[i] * site_op(SZ, i, n)
    return expm(-1j * gen)


def dense_free_propagator(h0: np.ndarray, tau: float) -> np.ndarray:
    return expm(-1j * tau * h0)


def dense_floquet(n: int, coupling: float, field: float, tau: float,
                  epsilon: float, alpha: float = math.inf) -> np.ndarray:
    """One-period unitary K_phi @ exp(-i H0 tau) with phi = pi(1/2 - epsilon)."""
    h0 = dense_hamiltonian(n, coupling, field, alpha)
    angles = np.full(n, math.pi * (0.5 - epsilon))
    return dense_kick(n, angles) @ dense_free_propagator(h0, tau)


def total_sx(n: int) -> np.ndarray:
    out = np.zeros((2**n, 2**n), dtype=np.complex128)
    for i in range(n):
        out += site_op(SX, i, n)
    return out


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return psi / np.linalg.norm(psi)
