"""Stroboscopic trajectory runner.

A trajectory samples the per-spin x magnetization once per drive period,
after the period has completed (free evolution + kick); sample 0 is taken
on the prepared initial state.  With this convention the disconnected-spin
limit (J = 0, h = 0) reproduces m^x(n) = (-1)^n [2 cos^2(eps pi n) - 1]
exactly, which the tests pin.

For h = 0 the one-period map factorizes into diagonal phases in the x
basis (interaction), a Walsh-Hadamard transform, and diagonal kick phases
in the z basis, so whole batches of trajectories run at O(N 2^N) per
period without ever touching a dense operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import (
    DriveSpec,
    HamiltonianSpec,
    IsingHamiltonian,
    build_hamiltonian,
    magnetization_x,
    product_state_x,
)
from .evolve import KickNoise, Propagator, drive_angles, floquet_step, kick_phase
from .kernels import fwht_norm, fwht_unnorm, site_sign_table, z_sign_total

try:  # optional accelerator for the clean h = 0 inner loop
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

INITIAL_STATE_TAGS = ("product_right", "product_left", "symmetry_broken_gs")


@dataclass(frozen=True)
class TrajectoryResult:
    mx_series: np.ndarray
    h_spec: HamiltonianSpec
    drive: DriveSpec
    initial_state_tag: str
    norm_drift: float


@dataclass(frozen=True)
class EnsembleResult:
    mean_series: np.ndarray
    realization_series: np.ndarray  # (n_realizations, n_periods)
    h_spec: HamiltonianSpec
    drive: DriveSpec
    initial_state_tag: str
    norm_drift: float


def prepare_initial_state(spec: HamiltonianSpec, tag: str = "product_right") -> np.ndarray:
    """Initial state in the z basis.

    'symmetry_broken_gs' builds the positively x-polarized combination of
    the two quasi-degenerate lowest eigenstates of H0 (requires the
    ferromagnetic regime 0 <= h/J < 1); for h = 0 this is exactly |R>.
    """
    if tag == "product_right":
        return product_state_x(spec.n_sites, "right")
    if tag == "product_left":
        return product_state_x(spec.n_sites, "left")
    if tag != "symmetry_broken_gs":
        raise ValueError(f"unknown initial state tag {tag!r}")
    if spec.field == 0.0:
        return product_state_x(spec.n_sites, "right")
    if spec.coupling == 0.0 or not 0.0 <= spec.field / spec.coupling < 1.0:
        raise ValueError(
            "symmetry-broken ground state requires 0 <= h/J < 1 "
            f"(got h/J = {spec.field / spec.coupling if spec.coupling else np.inf:.3g})"
        )
    ham = build_hamiltonian(spec)
    _, vecs = ham.lowest_pair()
    n = spec.n_sites
    # total sigma^x restricted to the two-state ground manifold, per spin
    sx_vecs = np.zeros_like(vecs)
    for i in range(n):
        v = vecs.reshape(ham.dim >> (i + 1), 2, 1 << i, 2)
        sx_vecs += v[:, ::-1, :, :].reshape(ham.dim, 2)
    block = vecs.T @ sx_vecs / n
    block = 0.5 * (block + block.T)
    w, q = np.linalg.eigh(block)
    if w[-1] < 0.2:
        raise ValueError(
            "degenerate ground pair carries no x moment "
            f"(max m^x = {w[-1]:.3g}); cannot resolve a symmetry-broken state"
        )
    psi = vecs @ q[:, -1]
    return psi.astype(np.complex128)


def _h0_series_numpy(
    psi: np.ndarray,
    x_phase: np.ndarray,
    kick_scaled: np.ndarray,
    weights: np.ndarray,
    mx: np.ndarray,
    noise_phases=None,
) -> np.ndarray:
    work = np.empty_like(psi)
    mx[:, 0] = (psi.real**2 + psi.imag**2) @ weights
    for n in range(1, mx.shape[1]):
        psi *= x_phase
        res = fwht_unnorm(psi, work)
        work = psi if res is not psi else work
        psi = res
        psi *= kick_scaled if noise_phases is None else noise_phases(n - 1)
        res = fwht_unnorm(psi, work)
        work = psi if res is not psi else work
        psi = res
        mx[:, n] = (psi.real**2 + psi.imag**2) @ weights
    return psi


if HAVE_NUMBA:

    @njit(cache=True)
    def _fwht_inplace_jit(row):  # pragma: no cover
        dim = row.shape[0]
        h = 1
        while h < dim:
            for i0 in range(0, dim, 2 * h):
                for j in range(i0, i0 + h):
                    x = row[j]
                    y = row[j + h]
                    row[j] = x + y
                    row[j + h] = x - y
            h *= 2

    @njit(cache=True)
    def _h0_series_jit(psi, x_phase, kick_scaled, weights, mx):  # pragma: no cover
        n_batch, dim = psi.shape
        for b in range(n_batch):
            acc = 0.0
            for k in range(dim):
                v = psi[b, k]
                acc += (v.real * v.real + v.imag * v.imag) * weights[k]
            mx[b, 0] = acc
        for n in range(1, mx.shape[1]):
            for b in range(n_batch):
                row = psi[b]
                for k in range(dim):
                    row[k] = row[k] * x_phase[b, k]
                _fwht_inplace_jit(row)
                for k in range(dim):
                    row[k] = row[k] * kick_scaled[b, k]
                _fwht_inplace_jit(row)
                acc = 0.0
                for k in range(dim):
                    v = row[k]
                    acc += (v.real * v.real + v.imag * v.imag) * weights[k]
                mx[b, n] = acc


def _h0_series_batch(
    psi0_x: np.ndarray,
    x_phase: np.ndarray,
    kick_scaled: np.ndarray,
    n_periods: int,
    n_sites: int,
    noise_phases=None,
) -> tuple[np.ndarray, np.ndarray]:
    """Stroboscopic magnetization for a batch of h = 0 trajectories.

    psi0_x: (B, dim) initial amplitudes in the x basis.
    x_phase: exp(-i tau E_x), shape (dim,) or (B, dim).
    kick_scaled: z-basis kick phases divided by dim (absorbs the two
        unnormalized Walsh-Hadamard passes); ignored for periods where
        `noise_phases(period)` supplies fresh ones.
    Returns (mx of shape (B, n_periods), norm drift per row).
    """
    weights = z_sign_total(n_sites) / n_sites
    psi = np.array(psi0_x, dtype=np.complex128, copy=True)
    mx = np.empty((psi.shape[0], n_periods))
    if noise_phases is None and HAVE_NUMBA:
        xp = np.ascontiguousarray(np.broadcast_to(x_phase, psi.shape))
        kp = np.ascontiguousarray(np.broadcast_to(kick_scaled, psi.shape))
        _h0_series_jit(psi, xp, kp, weights, mx)
    else:
        psi = _h0_series_numpy(psi, x_phase, kick_scaled, weights, mx, noise_phases)
    drift = np.abs(np.sqrt((psi.real**2 + psi.imag**2).sum(axis=1)) - 1.0)
    return mx, drift


def _run_h0(
    ham: IsingHamiltonian, drive: DriveSpec, psi0: np.ndarray, noise: KickNoise | None
) -> tuple[np.ndarray, float]:
    n = ham.spec.n_sites
    psi0_x = fwht_norm(psi0)[None, :]
    x_phase = np.exp(-1j * drive.period_tau * ham.x_diagonal)
    kick_scaled = (
        kick_phase(n, drive_angles(drive, np.full(n, drive.epsilon))) / ham.dim
    )
    noise_fn = None
    if drive.noise_bound > 0.0:
        src = noise if noise is not None else KickNoise(drive.rng_seed)
        signs = site_sign_table(n)

        def noise_fn(period: int) -> np.ndarray:
            eps = src.epsilons(period, n, drive.noise_bound)
            return np.exp(-1j * (drive_angles(drive, eps) @ signs)) / ham.dim

    mx, drift = _h0_series_batch(
        psi0_x, x_phase, kick_scaled, drive.n_periods, n, noise_fn
    )
    return mx[0], float(drift[0])


def run_trajectory(
    h_spec: HamiltonianSpec,
    drive: DriveSpec,
    tag: str = "product_right",
    prop: Propagator = Propagator(),
    noise: KickNoise | None = None,
    initial_state: np.ndarray | None = None,
) -> TrajectoryResult:
    """Evolve for drive.n_periods periods, sampling m^x after each one.

    `initial_state` overrides the tag-based preparation (the tag is still
    recorded); useful when one prepared state feeds many realizations.
    """
    ham = build_hamiltonian(h_spec)
    psi = prepare_initial_state(h_spec, tag) if initial_state is None else initial_state
    if h_spec.field == 0.0:
        mx, drift = _run_h0(ham, drive, psi, noise)
        return TrajectoryResult(mx, h_spec, drive, tag, drift)
    mx = np.empty(drive.n_periods)
    mx[0] = magnetization_x(psi)
    max_drift = 0.0
    for n in range(1, drive.n_periods):
        psi = floquet_step(psi, ham, drive, prop, noise=noise, period=n - 1)
        mx[n] = magnetization_x(psi)
        max_drift = max(max_drift, abs(np.linalg.norm(psi) - 1.0))
    return TrajectoryResult(mx, h_spec, drive, tag, max_drift)


def run_noisy_ensemble(
    h_spec: HamiltonianSpec,
    drive: DriveSpec,
    tag: str = "product_right",
    prop: Propagator = Propagator(),
    n_realizations: int = 1,
) -> EnsembleResult:
    """Independent noise realizations of the same drive, plus their mean.

    Realization r draws its kick errors from the (seed, r) stream, so the
    ensemble is reproducible and independent of evaluation order.
    """
    if n_realizations < 1:
        raise ValueError("n_realizations must be >= 1")
    if drive.noise_bound == 0.0:
        single = run_trajectory(h_spec, drive, tag, prop)
        series = np.tile(single.mx_series, (n_realizations, 1))
        return EnsembleResult(
            single.mx_series.copy(), series, h_spec, drive, tag, single.norm_drift
        )
    psi0 = prepare_initial_state(h_spec, tag)
    runs = [
        run_trajectory(
            h_spec,
            drive,
            tag,
            prop,
            noise=KickNoise(drive.rng_seed, r),
            initial_state=psi0,
        )
        for r in range(n_realizations)
    ]
    series = np.stack([r.mx_series for r in runs])
    return EnsembleResult(
        series.mean(axis=0),
        series,
        h_spec,
        drive,
        tag,
        max(r.norm_drift for r in runs),
    )
