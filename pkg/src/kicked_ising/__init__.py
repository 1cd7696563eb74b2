"""Exact simulator for periodically kicked Ising chains.

Stroboscopic magnetization, subharmonic spectral diagnostics, quasi-energy
pairing statistics, and the collective-spin closed form, at exact-dynamics
scale (N <= 14 trajectories, N <= 12 full Floquet spectra).
"""

__version__ = "0.1.0"

from .chain import (
    DriveSpec,
    HamiltonianSpec,
    IsingHamiltonian,
    build_hamiltonian,
    magnetization_x,
    product_state_x,
)
from .dynamics import (
    EnsembleResult,
    TrajectoryResult,
    prepare_initial_state,
    run_noisy_ensemble,
    run_trajectory,
)
from .evolve import (
    KickNoise,
    PropagationError,
    Propagator,
    apply_kick,
    build_floquet_matrix,
    evolve_free,
    floquet_step,
)
from .floquet import (
    FloquetEigensystem,
    PairingGaps,
    floquet_eigensystem,
    pairing_gaps,
    pairing_size_scaling,
)
from .lmg import (
    DickeSector,
    dicke_omega_1,
    dicke_sector,
    kicked_beat_frequency,
    lmg_exact_trajectory,
    lmg_perturbative_mx,
)
from .spectral import (
    MainPeak,
    ScalingFit,
    Spectrum,
    fit_splitting_scaling,
    fourier_spectrum,
    kld,
    main_peak_splitting,
    reference_spectrum,
    scan_phase_map,
)

__all__ = [
    "DriveSpec",
    "HamiltonianSpec",
    "IsingHamiltonian",
    "build_hamiltonian",
    "magnetization_x",
    "product_state_x",
    "EnsembleResult",
    "TrajectoryResult",
    "prepare_initial_state",
    "run_noisy_ensemble",
    "run_trajectory",
    "KickNoise",
    "PropagationError",
    "Propagator",
    "apply_kick",
    "build_floquet_matrix",
    "evolve_free",
    "floquet_step",
    "FloquetEigensystem",
    "PairingGaps",
    "floquet_eigensystem",
    "pairing_gaps",
    "pairing_size_scaling",
    "DickeSector",
    "dicke_omega_1",
    "dicke_sector",
    "kicked_beat_frequency",
    "lmg_exact_trajectory",
    "lmg_perturbative_mx",
    "MainPeak",
    "ScalingFit",
    "Spectrum",
    "fit_splitting_scaling",
    "fourier_spectrum",
    "kld",
    "main_peak_splitting",
    "reference_spectrum",
    "scan_phase_map",
]
