"""Ising chains in a transverse field, acting on 2^N statevectors.

The free Hamiltonian is

    H0 = -J sum_{i<j} c_ij sigma^x_i sigma^x_j - h sum_i sigma^z_i

on an open chain, with c_ij = 1/|i-j|^alpha for a finite range exponent
alpha and c_ij = delta_{j,i+1} in the nearest-neighbour limit alpha = inf.
The interaction is diagonal in the sigma^x product basis; the transverse
field is diagonal in the sigma^z product basis.  Both diagonals are
precomputed so that the operator never needs to exist as a dense matrix
for dynamics (dense forms are built on demand for exact diagonalization
at small N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .kernels import pair_flip_view, popcount_table, site_sign_table, z_sign_total

# Caps: statevectors beyond 2^20 amplitudes or dense 2^12 x 2^12 matrices
# signal memory exhaustion rather than a physics limit.
MAX_SITES = 20
DENSE_CAP_SITES = 12


@dataclass(frozen=True)
class HamiltonianSpec:
    """Chain parameters: size, coupling J, transverse field h, range exponent."""

    n_sites: int
    coupling: float = 1.0
    field: float = 0.0
    range_exponent: float = math.inf
    boundary: str = "open"

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {self.n_sites}")
        if self.n_sites > MAX_SITES:
            raise ValueError(
                f"n_sites = {self.n_sites} exceeds the statevector cap "
                f"({MAX_SITES} sites = 2^{MAX_SITES} amplitudes)"
            )
        if self.coupling < 0:
            raise ValueError("coupling J must be >= 0 (ferromagnetic convention)")
        if not self.range_exponent > 0:
            raise ValueError("range_exponent alpha must be > 0 (inf = nearest neighbour)")
        if self.boundary != "open":
            raise ValueError("only open boundary conditions are supported")

    @property
    def dim(self) -> int:
        return 1 << self.n_sites


@dataclass(frozen=True)
class DriveSpec:
    """Periodic kick parameters.

    The kick rotates every spin about z by phi_i = pi*(1/2 - eps_i); for a
    clean drive (noise_bound = 0) eps_i = epsilon on every site, otherwise
    eps_i is drawn i.i.d. uniform on [0, noise_bound] afresh each period.
    The drive frequency 2*pi/period_tau is always derived, never stored.
    """

    period_tau: float
    epsilon: float = 0.08
    noise_bound: float = 0.0
    n_periods: int = 1000
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.period_tau < 0:
            raise ValueError("period_tau must be >= 0")
        if self.noise_bound < 0:
            raise ValueError("noise_bound must be >= 0")
        if self.n_periods < 1:
            raise ValueError("n_periods must be >= 1")

    @property
    def omega_d(self) -> float:
        """Drive frequency 2*pi/tau (derived quantity)."""
        return 2.0 * math.pi / self.period_tau


class IsingHamiltonian:
    """Action-on-vector form of H0 plus its two diagonal representations.

    `x_diagonal` holds the interaction eigenvalues in the sigma^x product
    basis, `z_diagonal` the field eigenvalues in the sigma^z basis.  apply()
    works in the z basis and never forms a dense matrix.
    """

    def __init__(self, spec: HamiltonianSpec):
        self.spec = spec
        self.dim = spec.dim
        n = spec.n_sites
        self.pairs: list[tuple[int, int, float]] = []
        if spec.coupling != 0.0:
            if math.isinf(spec.range_exponent):
                self.pairs = [(i, i + 1, spec.coupling) for i in range(n - 1)]
            else:
                self.pairs = [
                    (i, j, spec.coupling / abs(i - j) ** spec.range_exponent)
                    for i in range(n - 1)
                    for j in range(i + 1, n)
                ]
        signs = site_sign_table(n)
        x_diag = np.zeros(self.dim)
        for i, j, c in self.pairs:
            x_diag -= c * signs[i] * signs[j]
        x_diag.setflags(write=False)
        self.x_diagonal = x_diag
        z_diag = -spec.field * z_sign_total(n)
        z_diag.setflags(write=False)
        self.z_diagonal = z_diag
        self._u0_cache: dict[float, np.ndarray] = {}

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """H0 @ psi in the z basis, O(n_pairs * 2^N)."""
        out = self.z_diagonal * psi
        for i, j, c in self.pairs:
            out -= c * pair_flip_view(psi, i, j)
        return out

    @cached_property
    def dense(self) -> np.ndarray:
        """Dense matrix form (small N only; needed for exact eigensystems)."""
        if self.spec.n_sites > DENSE_CAP_SITES:
            raise ValueError(
                f"dense form limited to {DENSE_CAP_SITES} sites, "
                f"got {self.spec.n_sites}"
            )
        h = np.zeros((self.dim, self.dim))
        ix = np.arange(self.dim)
        h[ix, ix] = self.z_diagonal
        for i, j, c in self.pairs:
            mask = (1 << i) | (1 << j)
            h[ix ^ mask, ix] -= c
        return h

    @cached_property
    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """(eigenvalues, eigenvectors) of the dense form, ascending."""
        return np.linalg.eigh(self.dense)

    @cached_property
    def eigensystem_complex(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigensystem with complex-typed vectors (avoids per-step upcasts)."""
        evals, evecs = self.eigensystem
        return evals, evecs.astype(np.complex128)

    def free_propagator_dense(self, tau: float) -> np.ndarray:
        """Cached dense exp(-i H0 tau) for repeated stroboscopic steps."""
        cached = self._u0_cache.get(tau)
        if cached is None:
            evals, evecs = self.eigensystem_complex
            cached = (evecs * np.exp(-1j * tau * evals)) @ evecs.conj().T
            self._u0_cache[tau] = cached
        return cached

    def lowest_pair(self) -> tuple[np.ndarray, np.ndarray]:
        """(energies, vectors) of the two lowest eigenstates.

        Uses the dense eigensystem when it is cheap (or already cached),
        otherwise a matrix-free Lanczos solve with a fixed starting vector
        for reproducibility.
        """
        if self.spec.n_sites <= 10 or "eigensystem" in self.__dict__:
            evals, evecs = self.eigensystem
            return evals[:2], evecs[:, :2]
        from scipy.sparse.linalg import LinearOperator, eigsh

        op = LinearOperator(
            (self.dim, self.dim), matvec=self.apply, dtype=np.float64
        )
        v0 = np.full(self.dim, 1.0 / math.sqrt(self.dim))
        evals, evecs = eigsh(op, k=2, which="SA", v0=v0)
        order = np.argsort(evals)
        return evals[order], evecs[:, order]


def build_hamiltonian(spec: HamiltonianSpec) -> IsingHamiltonian:
    """Construct the operator realization of `spec`."""
    return IsingHamiltonian(spec)


def product_state_x(n_sites: int, direction: str = "right") -> np.ndarray:
    """Fully x-polarized product state in the z basis.

    |right> has amplitude 2^(-N/2) on every bitstring; |left> carries an
    extra (-1)^popcount sign.
    """
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    if n_sites > MAX_SITES:
        raise ValueError(f"n_sites exceeds the statevector cap ({MAX_SITES})")
    dim = 1 << n_sites
    amp = 1.0 / math.sqrt(dim)
    if direction == "right":
        psi = np.full(dim, amp, dtype=np.complex128)
    elif direction == "left":
        psi = amp * (1.0 - 2.0 * (popcount_table(n_sites) & 1)).astype(np.complex128)
    else:
        raise ValueError(f"direction must be 'right' or 'left', got {direction!r}")
    return psi


def magnetization_x(psi: np.ndarray) -> float:
    """Per-spin magnetization (1/N) <psi| sum_i sigma^x_i |psi>.

    sigma^x_i is a bit flip in the z basis, so each site contributes
    2 Re sum conj(psi_b) psi_{b^bit} without any dense operator.
    """
    dim = psi.shape[-1]
    n = dim.bit_length() - 1
    total = 0.0
    for i in range(n):
        v = psi.reshape(dim >> (i + 1), 2, 1 << i)
        total += 2.0 * np.real(np.vdot(v[:, 0, :], v[:, 1, :]))
    return total / n


def magnetization_x_diag(psi_x: np.ndarray, n_sites: int) -> np.ndarray:
    """Same observable evaluated on x-basis amplitudes (diagonal form)."""
    w = z_sign_total(n_sites) / n_sites
    return (np.abs(psi_x) ** 2) @ w
