"""Time evolution: free propagator exp(-i H0 tau), per-site kicks, and the
composed one-period map  U = K_phi exp(-i H0 tau).

Three free-evolution routes, all behind `evolve_free`:

* h = 0: H0 is diagonal in the x product basis, so the step is a
  Walsh-Hadamard sandwich around a precomputed phase table (exact,
  O(N 2^N) per step).
* exact_eigen: dense eigendecomposition, cached on the Hamiltonian
  (N <= 12, exact to machine precision).
* krylov: adaptive Lanczos approximation of the matrix exponential for
  anything larger; fails loudly if the requested tolerance cannot be met.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .chain import DENSE_CAP_SITES, DriveSpec, IsingHamiltonian
from .kernels import fwht_norm, site_sign_table, z_sign_total

log = logging.getLogger(__name__)

KRYLOV_START_DIM = 12
KRYLOV_MAX_DIM = 192


class PropagationError(RuntimeError):
    """Iterative propagation failed to reach the requested tolerance."""


@dataclass(frozen=True)
class Propagator:
    """Free-evolution method selector.

    method 'auto' resolves to exact_eigen when the dense form is affordable
    and krylov otherwise (the exact h = 0 diagonal route applies regardless).
    """

    method: str = "auto"
    tolerance: float = 1e-10

    def __post_init__(self) -> None:
        if self.method not in ("auto", "exact_eigen", "krylov"):
            raise ValueError(f"unknown propagation method {self.method!r}")
        if not 0 < self.tolerance < 1e-2:
            raise ValueError("tolerance must be in (0, 1e-2)")

    def resolve(self, n_sites: int) -> str:
        # above 10 sites the cached dense propagator stops paying for its
        # memory traffic; Lanczos wins even though dense stays legal to 12
        if self.method == "auto":
            return "exact_eigen" if n_sites <= 10 else "krylov"
        return self.method


def _check_norm(psi: np.ndarray, context: str) -> np.ndarray:
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > 1e-12:
        log.debug("norm drift %.3e after %s; renormalizing", drift, context)
        psi = psi / np.linalg.norm(psi)
    return psi


def evolve_free(
    psi: np.ndarray, ham: IsingHamiltonian, tau: float, prop: Propagator = Propagator()
) -> np.ndarray:
    """exp(-i H0 tau) @ psi."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if tau == 0.0:
        return psi.astype(np.complex128, copy=True)
    if ham.spec.field == 0.0:
        psi_x = fwht_norm(psi)
        psi_x *= np.exp(-1j * tau * ham.x_diagonal)
        return _check_norm(fwht_norm(psi_x), "diagonal free step")
    method = prop.resolve(ham.spec.n_sites)
    if method == "exact_eigen":
        if ham.spec.n_sites <= 10:
            out = ham.free_propagator_dense(tau) @ psi
        else:
            evals, evecs = ham.eigensystem_complex
            out = evecs @ (np.exp(-1j * tau * evals) * (evecs.conj().T @ psi))
        return _check_norm(out, "exact_eigen free step")
    out = lanczos_expm(ham.apply, psi, tau, prop.tolerance)
    return _check_norm(out, "krylov free step")


def lanczos_expm(
    apply_h,
    psi: np.ndarray,
    tau: float,
    tol: float,
    start_dim: int = KRYLOV_START_DIM,
    max_dim: int = KRYLOV_MAX_DIM,
) -> np.ndarray:
    """exp(-i tau H) psi for Hermitian H via an adaptive Lanczos subspace.

    The subspace starts at `start_dim` vectors and doubles until the
    a-posteriori residual estimate beta_{m+1} |[exp(-i tau T_m)]_{m,1}|
    drops below tol; raises PropagationError instead of silently truncating.
    """
    dim = psi.shape[-1]
    beta0 = np.linalg.norm(psi)
    if beta0 == 0.0:
        return psi.copy()
    max_dim = min(max_dim, dim)
    basis = [psi / beta0]
    alphas: list[float] = []
    betas: list[float] = []
    target = min(start_dim, max_dim)
    while True:
        while len(alphas) < target:
            k = len(alphas)
            w = apply_h(basis[k])
            a = float(np.real(np.vdot(basis[k], w)))
            alphas.append(a)
            w = w - a * basis[k]
            if k > 0:
                w = w - betas[k - 1] * basis[k - 1]
            # full reorthogonalization keeps the basis clean at modest m
            for v in basis:
                w = w - np.vdot(v, w) * v
            b = float(np.linalg.norm(w))
            betas.append(b)
            if b < 1e-14:  # happy breakdown: subspace is exact
                break
            basis.append(w / b)
        m = len(alphas)
        evals, evecs = eigh_tridiagonal(np.array(alphas), np.array(betas[: m - 1]))
        coeff = evecs @ (np.exp(-1j * tau * evals) * evecs[0, :])
        err = betas[m - 1] * abs(coeff[m - 1])
        if betas[m - 1] < 1e-14 or err < tol:
            v_mat = np.stack(basis[:m], axis=1)
            return beta0 * (v_mat @ coeff)
        if m >= max_dim:
            raise PropagationError(
                f"Krylov subspace reached {m} vectors without meeting "
                f"tolerance {tol:.1e} (residual estimate {err:.1e})"
            )
        target = min(2 * m, max_dim)


def kick_phase(n_sites: int, angles: np.ndarray) -> np.ndarray:
    """Diagonal of exp(-i sum_i phi_i sigma^z_i) in the z basis."""
    angles = np.asarray(angles, dtype=np.float64)
    if angles.shape != (n_sites,):
        raise ValueError(
            f"need one kick angle per site: expected shape ({n_sites},), "
            f"got {angles.shape}"
        )
    if np.ptp(angles) == 0.0:
        exponent = angles[0] * z_sign_total(n_sites)
    else:
        exponent = angles @ site_sign_table(n_sites)
    return np.exp(-1j * exponent)


def apply_kick(psi: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """K_phi @ psi: pure phases in the z basis, exactly unitary."""
    dim = psi.shape[-1]
    return psi * kick_phase(dim.bit_length() - 1, angles)


def drive_angles(drive: DriveSpec, epsilons: np.ndarray | float) -> np.ndarray:
    """Per-site kick angles phi_i = pi (1/2 - eps_i)."""
    return math.pi * (0.5 - np.atleast_1d(np.asarray(epsilons, dtype=np.float64)))


class KickNoise:
    """Counter-addressed per-period kick errors eps_i ~ U[0, noise_bound].

    Draws are reproducible from (seed, realization, period, site) alone:
    each period uses a fresh Philox stream at counter block
    [0, period, realization, 0], so trajectories can be replayed or
    parallelized in any order without changing the numbers.
    """

    def __init__(self, seed: int, realization: int = 0):
        self.seed = int(seed)
        self.realization = int(realization)

    def epsilons(self, period: int, n_sites: int, bound: float) -> np.ndarray:
        bitgen = np.random.Philox(
            key=self.seed, counter=[0, period, self.realization, 0]
        )
        return np.random.Generator(bitgen).uniform(0.0, bound, n_sites)


def floquet_step(
    psi: np.ndarray,
    ham: IsingHamiltonian,
    drive: DriveSpec,
    prop: Propagator = Propagator(),
    noise: KickNoise | None = None,
    period: int = 0,
) -> np.ndarray:
    """One full drive period: free evolution for tau, then the kick."""
    n = ham.spec.n_sites
    psi = evolve_free(psi, ham, drive.period_tau, prop)
    if drive.noise_bound > 0.0:
        if noise is None:
            noise = KickNoise(drive.rng_seed)
        eps = noise.epsilons(period, n, drive.noise_bound)
    else:
        eps = np.full(n, drive.epsilon)
    return apply_kick(psi, drive_angles(drive, eps))


def build_floquet_matrix(
    ham: IsingHamiltonian, drive: DriveSpec, prop: Propagator = Propagator()
) -> np.ndarray:
    """Dense one-period unitary, column j = U @ |j>.  Deterministic drives only."""
    n = ham.spec.n_sites
    if n > DENSE_CAP_SITES:
        raise ValueError(
            f"dense Floquet matrix limited to {DENSE_CAP_SITES} sites, got {n}"
        )
    if drive.noise_bound > 0.0:
        raise ValueError("spectral analysis requires a deterministic drive (noise_bound = 0)")
    if ham.spec.field == 0.0:
        # exact route: Hadamard-conjugated interaction phases
        dim = ham.dim
        had = _hadamard_matrix(n)
        u0 = (had * np.exp(-1j * drive.period_tau * ham.x_diagonal)) @ had
    else:
        evals, evecs = ham.eigensystem
        u0 = (evecs * np.exp(-1j * drive.period_tau * evals)) @ evecs.conj().T
    phases = kick_phase(n, drive_angles(drive, np.full(n, drive.epsilon)))
    u = phases[:, None] * u0
    residual = np.max(np.abs(u.conj().T @ u - np.eye(ham.dim)))
    if residual > 1e-9:
        raise PropagationError(f"Floquet matrix failed unitarity check ({residual:.2e})")
    return u


def _hadamard_matrix(n_sites: int) -> np.ndarray:
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    out = np.array([[1.0]])
    for _ in range(n_sites):
        out = np.kron(out, h)
    return out
