"""Infinite-range (collective spin) limit in the maximal-spin sector.

The infinite-range Ising chain reduces to H = -(1/N)(S^x)^2 - h S^z acting
on the total-spin S = N/2 multiplet, an (N+1)-dimensional problem.  The
ladder is quantized along x, so |S, S> is the fully right-polarized product
state and S^z is the hopping operator between neighbouring ladder states.

The kicked evolution in this sector is exact and cheap; it doubles as an
oracle for the first-order closed form of the stroboscopic magnetization,

    m^x(n) = (1 - C)(-1)^n + (C/2)[cos(n(pi - w1 tau)) + cos(n(pi + w1 tau))]

with C = 2 pi^2 eps^2 / (1 - cos(w1 tau)) and w1 the one-excitation gap.
(The quadratic-in-eps prefactor is fixed by the disconnected-spin limit:
at N = 1 the formula must reduce to (-1)^n [2 cos^2(eps pi n) - 1].)
Beyond first order the repeated kick also *shifts* the beat frequency by
O(eps^2); `kicked_beat_frequency` measures that shift from the sector
Floquet operator for long-horizon comparisons.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

MAX_SECTOR_SITES = 1000


class PerturbativeValidityWarning(UserWarning):
    """Emitted when the closed form is evaluated outside its small-eps regime."""


@dataclass(frozen=True)
class DickeSector:
    """Maximal-spin sector: x-quantized ladder operators and the gap w1."""

    n_sites: int
    total_spin: float
    sx_diagonal: np.ndarray       # S^x eigenvalues M = -S .. S
    sz_matrix: np.ndarray         # S^z in the x-quantized ladder basis
    h_matrix: np.ndarray          # -(1/N)(S^x)^2 - h S^z
    omega_1: float

    @property
    def dim(self) -> int:
        return self.n_sites + 1


def dicke_sector(n_sites: int, field: float = 0.0) -> DickeSector:
    if not 1 <= n_sites <= MAX_SECTOR_SITES:
        raise ValueError(f"n_sites must be in [1, {MAX_SECTOR_SITES}]")
    spin = n_sites / 2.0
    m = np.arange(-spin, spin + 1)
    # ladder operators with respect to the x quantization axis; S^z hops M -> M +- 1
    raise_off = np.sqrt(spin * (spin + 1) - m[:-1] * (m[:-1] + 1))
    lp = np.zeros((n_sites + 1, n_sites + 1))
    lp[np.arange(1, n_sites + 1), np.arange(n_sites)] = raise_off
    sz = (lp - lp.T) / 2j
    h_mat = -(1.0 / n_sites) * np.diag(m**2).astype(np.complex128) - field * sz
    m.setflags(write=False)
    return DickeSector(n_sites, spin, m, sz, h_mat, dicke_omega_1(n_sites, field))


def dicke_omega_1(n_sites: int, field: float = 0.0) -> float:
    """Energy of |S, S-1> relative to |S, S>.

    Computed as the difference of diagonal matrix elements in the
    x-quantized ladder; exact at h = 0, where it equals (2S - 1)/N.  The
    field term is purely off-diagonal in this basis and drops out.
    """
    spin = n_sites / 2.0
    return (spin**2 - (spin - 1.0) ** 2) / n_sites


def _sector_floquet(sector: DickeSector, tau: float, epsilon: float) -> np.ndarray:
    evals, evecs = np.linalg.eigh(sector.h_matrix)
    u0 = (evecs * np.exp(-1j * tau * evals)) @ evecs.conj().T
    wz, vz = np.linalg.eigh(sector.sz_matrix)
    phi = math.pi * (0.5 - epsilon)
    kick = (vz * np.exp(-2j * phi * wz)) @ vz.conj().T
    return kick @ u0


def lmg_exact_trajectory(
    n_sites: int, field: float, tau: float, epsilon: float, n_periods: int
) -> np.ndarray:
    """Exact kicked evolution of |S, S> inside the S = N/2 sector.

    Returns the per-spin magnetization m^x(n) = <S^x>/S for n = 0 .. M-1,
    sampled after each completed period.
    """
    sector = dicke_sector(n_sites, field)
    u = _sector_floquet(sector, tau, epsilon)
    psi = np.zeros(sector.dim, dtype=np.complex128)
    psi[-1] = 1.0  # |S, S>
    mx = np.empty(n_periods)
    mx[0] = 1.0
    for n in range(1, n_periods):
        psi = u @ psi
        mx[n] = np.real(np.vdot(psi, sector.sx_diagonal * psi)) / sector.total_spin
    return mx


def lmg_perturbative_mx(
    n_sites: int, epsilon: float, tau: float, omega_1: float, n_periods: int
) -> np.ndarray:
    """First-order closed form for the kicked collective spin.

    Three spectral peaks: the period-doubled line at omega*tau = pi of
    weight 1 - C and side peaks at pi +- omega_1*tau of weight C/2 each,
    with C = 2 pi^2 eps^2 / (1 - cos(omega_1 tau)).
    """
    expansion = epsilon**2 * math.pi**2 * n_sites / (1.0 - math.cos(omega_1 * tau))
    if expansion >= 0.5:
        warnings.warn(
            f"one-excitation weight {expansion:.3g} is not small; the "
            "first-order closed form is unreliable here",
            PerturbativeValidityWarning,
            stacklevel=2,
        )
    c = 2.0 * math.pi**2 * epsilon**2 / (1.0 - math.cos(omega_1 * tau))
    n = np.arange(n_periods)
    return (1.0 - c) * (-1.0) ** n + 0.5 * c * (
        np.cos(n * (math.pi - omega_1 * tau)) + np.cos(n * (math.pi + omega_1 * tau))
    )


def perturbative_weight(n_sites: int, epsilon: float, tau: float, omega_1: float) -> float:
    """The prefactor C entering the closed form."""
    return 2.0 * math.pi**2 * epsilon**2 / (1.0 - math.cos(omega_1 * tau))


def kicked_beat_frequency(
    n_sites: int, tau: float, epsilon: float, field: float = 0.0
) -> float:
    """Drive-renormalized one-excitation beat frequency (times tau).

    Quasi-energy difference between the Floquet modes with the largest
    overlap on |S, S> and |S, S-1>; for eps -> 0 this tends to
    omega_1 * tau, and at finite eps it carries the O(eps^2) shift that
    dominates closed-form dephasing over long horizons.
    """
    sector = dicke_sector(n_sites, field)
    u = _sector_floquet(sector, tau, epsilon)
    lam, modes = np.linalg.eig(u)
    mu_tau = -np.angle(lam)
    # the polarized states split over pi-paired partner modes; scan both
    # partners of each and keep the gap closest to the bare one
    ground = np.argsort(np.abs(modes[-1, :]) ** 2)[::-1][:2]
    magnon = np.argsort(np.abs(modes[-2, :]) ** 2)[::-1][:2]
    bare = sector.omega_1 * tau
    candidates = []
    for a in magnon:
        for b in ground:
            gap = (mu_tau[a] - mu_tau[b]) % (2.0 * math.pi)
            candidates.extend([gap, 2.0 * math.pi - gap])
    return min(candidates, key=lambda g: abs(g - bare))
