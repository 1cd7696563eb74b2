import math

import numpy as np
import pytest

from kicked_ising.chain import (
    DriveSpec,
    HamiltonianSpec,
    build_hamiltonian,
    magnetization_x,
    product_state_x,
)

from oracles import dense_hamiltonian, random_state, total_sx


def test_two_site_bond_eigenvalues():
    ham = build_hamiltonian(HamiltonianSpec(n_sites=2, coupling=1.0, field=0.0))
    evals = np.sort(np.linalg.eigvalsh(ham.dense))
    assert np.allclose(evals, [-1.0, -1.0, 1.0, 1.0], atol=1e-14)


def test_domain_wall_manifolds_n4():
    # h = 0, open NN chain: ground energy -3J, first manifold at -J (gap 2J)
    ham = build_hamiltonian(HamiltonianSpec(n_sites=4, coupling=1.0, field=0.0))
    evals = np.sort(np.linalg.eigvalsh(ham.dense))
    assert evals[0] == pytest.approx(-3.0, abs=1e-12)
    distinct = np.unique(np.round(evals, 9))
    assert distinct[0] == pytest.approx(-3.0, abs=1e-9)
    assert distinct[1] == pytest.approx(-1.0, abs=1e-9)


@pytest.mark.parametrize("n", [3, 5, 6])
def test_domain_wall_ladder_and_degeneracies(n):
    # Sorted distinct eigenvalues are -J(N-1) + 2Jk with multiplicity 2*C(N-1,k)
    ham = build_hamiltonian(HamiltonianSpec(n_sites=n, coupling=1.0, field=0.0))
    evals = np.sort(np.linalg.eigvalsh(ham.dense))
    expected = []
    for k in range(n):
        expected += [-(n - 1) + 2 * k] * (2 * math.comb(n - 1, k))
    assert np.allclose(evals, expected, atol=1e-10)


def test_long_range_matches_kron_oracle():
    spec = HamiltonianSpec(n_sites=4, coupling=1.0, field=0.5, range_exponent=2.0)
    ham = build_hamiltonian(spec)
    oracle = dense_hamiltonian(4, 1.0, 0.5, alpha=2.0)
    assert np.max(np.abs(ham.dense - oracle)) < 1e-12
    evals = np.linalg.eigvalsh(ham.dense)
    evals_oracle = np.linalg.eigvalsh(oracle)
    assert np.max(np.abs(evals - evals_oracle)) < 1e-12


@pytest.mark.parametrize("n,alpha,field", [(2, math.inf, 0.0), (4, math.inf, 0.32), (5, 1.5, 0.7)])
def test_apply_matches_dense(n, alpha, field):
    spec = HamiltonianSpec(n_sites=n, coupling=1.0, field=field, range_exponent=alpha)
    ham = build_hamiltonian(spec)
    oracle = dense_hamiltonian(n, 1.0, field, alpha=alpha)
    rng = np.random.default_rng(7)
    for _ in range(5):
        psi = random_state(n, rng)
        assert np.max(np.abs(ham.apply(psi) - oracle @ psi)) < 1e-12


def test_hermiticity_on_random_vectors():
    rng = np.random.default_rng(11)
    for n in (2, 4, 6):
        spec = HamiltonianSpec(n_sites=n, coupling=1.0, field=0.4, range_exponent=1.5)
        ham = build_hamiltonian(spec)
        scale = np.max(np.abs(ham.x_diagonal)) + abs(spec.field) * n
        for _ in range(100):
            phi = random_state(n, rng)
            psi = random_state(n, rng)
            lhs = np.vdot(phi, ham.apply(psi))
            rhs = np.conj(np.vdot(psi, ham.apply(phi)))
            assert abs(lhs - rhs) < 1e-12 * scale


def test_large_alpha_converges_to_nearest_neighbour():
    n = 6
    nn = build_hamiltonian(HamiltonianSpec(n_sites=n, coupling=1.0, field=0.0))
    lr = build_hamiltonian(
        HamiltonianSpec(n_sites=n, coupling=1.0, field=0.0, range_exponent=30.0)
    )
    e_nn = np.sort(np.linalg.eigvalsh(nn.dense))
    e_lr = np.sort(np.linalg.eigvalsh(lr.dense))
    assert np.max(np.abs(e_nn - e_lr)) < 2.0 ** (1 - 30) * n**2


def test_product_state_single_site():
    psi = product_state_x(1, "right")
    assert np.allclose(psi, [1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_product_state_left_sign_convention():
    psi = product_state_x(2, "left")
    assert magnetization_x(psi) == pytest.approx(-1.0, abs=1e-14)
    # amplitudes are 2^{-N/2} (-1)^popcount
    assert np.allclose(psi, np.array([0.5, -0.5, -0.5, 0.5]))


@pytest.mark.parametrize("n", list(range(1, 15)))
def test_product_state_fully_polarized(n):
    psi = product_state_x(n, "right")
    assert abs(np.vdot(psi, psi) - 1.0) < 1e-12
    assert magnetization_x(psi) == pytest.approx(1.0, abs=1e-14)


def test_product_state_energy_expectation():
    # <R| H0(h=0) |R> = -(N-1) J for the NN chain
    psi = product_state_x(10, "right")
    ham = build_hamiltonian(HamiltonianSpec(n_sites=10, coupling=1.0, field=0.0))
    energy = np.real(np.vdot(psi, ham.apply(psi)))
    assert energy == pytest.approx(-9.0, abs=1e-12)


def test_magnetization_matches_dense_operator():
    rng = np.random.default_rng(3)
    n = 3
    phases = np.exp(2j * np.pi * rng.random(2**n))
    psi = phases / math.sqrt(2**n)
    oracle = np.real(np.vdot(psi, total_sx(n) @ psi)) / n
    assert magnetization_x(psi) == pytest.approx(oracle, abs=1e-12)


def test_magnetization_range():
    rng = np.random.default_rng(5)
    for _ in range(20):
        psi = random_state(4, rng)
        assert -1.0 - 1e-12 <= magnetization_x(psi) <= 1.0 + 1e-12


def test_spec_validation():
    with pytest.raises(ValueError):
        HamiltonianSpec(n_sites=1)
    with pytest.raises(ValueError):
        HamiltonianSpec(n_sites=25)
    with pytest.raises(ValueError):
        HamiltonianSpec(n_sites=4, range_exponent=0.0)
    with pytest.raises(ValueError):
        HamiltonianSpec(n_sites=4, range_exponent=-1.0)
    with pytest.raises(ValueError):
        HamiltonianSpec(n_sites=4, coupling=-0.5)
    with pytest.raises(ValueError):
        HamiltonianSpec(n_sites=4, boundary="periodic")
    with pytest.raises(ValueError):
        DriveSpec(period_tau=-0.1)
    with pytest.raises(ValueError):
        DriveSpec(period_tau=0.6, noise_bound=-0.01)
    with pytest.raises(ValueError):
        DriveSpec(period_tau=0.6, n_periods=0)


def test_drive_derived_frequency():
    drive = DriveSpec(period_tau=0.6)
    assert drive.omega_d == pytest.approx(2 * math.pi / 0.6)
