# =============================================================================
# FILE: test_dynamics.py
# PURPOSE:
#   Pytest suite for banded diagonalization and exact Dicke-space evolution.
# =============================================================================

import numpy as np
import pytest

from squeezing.collective import Direction, build_collective, coherent_state
from squeezing.dynamics import diagonalize, evolve, evolve_series
from squeezing.errors import InvalidArgumentError
from squeezing.protocols import ProtocolKind, hamiltonian_for


@pytest.mark.parametrize("kind", list(ProtocolKind))
def test_reconstruction(kind):
    """V Lambda V^dagger reproduces every protocol Hamiltonian."""
    h = hamiltonian_for(kind, 20)
    spectral = diagonalize(h)
    assert np.allclose(spectral.reconstruct(), h.to_dense(), atol=1e-9)
    assert np.all(np.diff(spectral.eigenvalues) >= -1e-12)


def test_eigenvectors_unitary():
    """The eigenvector matrix is unitary."""
    v = diagonalize(hamiltonian_for("tnt", 30)).eigenvectors
    assert np.allclose(v.conj().T @ v, np.eye(31), atol=1e-10)


def test_propagator_unitary():
    """exp(-iHt) is unitary."""
    u = diagonalize(hamiltonian_for("tat", 16)).propagator(0.37)
    assert np.allclose(u.conj().T @ u, np.eye(17), atol=1e-10)


def test_diagonal_path_skips_lapack():
    """A diagonal Hamiltonian keeps permuted unit eigenvectors."""
    spectral = diagonalize(hamiltonian_for("oat", 6))
    assert np.allclose(spectral.eigenvalues, sorted((np.arange(7) - 3.0) ** 2))
    assert np.allclose(np.abs(spectral.eigenvectors).sum(axis=0), 1.0)


def test_oat_phases_exact():
    """Under chi S_z^2 each Dicke amplitude only picks up exp(-i m^2 t)."""
    n, t = 10, 0.8
    psi0 = coherent_state(n, Direction.MINUS_X)
    psi = evolve(diagonalize(hamiltonian_for("oat", n)), psi0, t)
    m = np.arange(n + 1) - n / 2
    assert np.allclose(psi.amplitudes, psi0.amplitudes * np.exp(-1j * m * m * t), atol=1e-12)


def test_zero_time_is_identity():
    """evolve at t = 0 returns the initial state."""
    psi0 = coherent_state(25, Direction.MINUS_X)
    psi = evolve(diagonalize(hamiltonian_for("tat", 25)), psi0, 0.0)
    assert psi.fidelity(psi0) == pytest.approx(1.0, abs=1e-12)


def test_norm_preserved_along_series():
    """Every state on a long grid stays normalized."""
    spectral = diagonalize(hamiltonian_for("tnt", 50))
    states = evolve_series(spectral, coherent_state(50, Direction.MINUS_X), np.linspace(0, 3, 40))
    for state in states:
        assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-10)


def test_series_matches_pointwise():
    """evolve_series agrees with evolve at each grid time."""
    spectral = diagonalize(hamiltonian_for("tat", 12))
    psi0 = coherent_state(12, Direction.MINUS_X)
    grid = [0.0, 0.1, 0.1, 0.45]
    for t, state in zip(grid, evolve_series(spectral, psi0, grid)):
        assert state.fidelity(evolve(spectral, psi0, t)) == pytest.approx(1.0, abs=1e-12)


def test_energy_conserved():
    """<H> is constant in time."""
    h = hamiltonian_for("tnt", 20)
    spectral = diagonalize(h)
    psi0 = coherent_state(20, Direction.MINUS_X)
    energies = [np.vdot(s.amplitudes, h.matvec(s.amplitudes)).real
                for s in evolve_series(spectral, psi0, np.linspace(0, 2, 9))]
    assert np.ptp(energies) < 1e-9


def test_invalid_grids_and_sizes():
    """Descending or non-finite grids and mismatched N are rejected."""
    spectral = diagonalize(hamiltonian_for("tat", 8))
    psi0 = coherent_state(8, Direction.MINUS_X)
    with pytest.raises(InvalidArgumentError):
        evolve_series(spectral, psi0, [0.2, 0.1])
    with pytest.raises(InvalidArgumentError):
        evolve_series(spectral, psi0, [0.0, float("nan")])
    with pytest.raises(InvalidArgumentError):
        evolve(spectral, psi0, float("inf"))
    with pytest.raises(InvalidArgumentError):
        evolve(spectral, coherent_state(9, Direction.MINUS_X), 0.1)


def test_sz_eigenstate_is_stationary():
    """A Dicke basis state does not move under a diagonal Hamiltonian."""
    from squeezing.collective import DickeState

    amps = np.zeros(9)
    amps[3] = 1.0
    state = DickeState(8, amps)
    later = evolve(diagonalize(build_collective("z", 8)), state, 5.0)
    assert later.fidelity(state) == pytest.approx(1.0)


def test_time_reversal():
    """Evolving forward by t and back by -t returns the initial state."""
    spectral = diagonalize(hamiltonian_for("tnt", 30))
    psi0 = coherent_state(30, Direction.MINUS_X)
    back = evolve(spectral, evolve(spectral, psi0, 0.9), -0.9)
    assert np.allclose(back.amplitudes, psi0.amplitudes, atol=1e-10)


def test_evolution_composes():
    """TAT at N = 50: t1 then t2 - t1 equals a single step to t2."""
    spectral = diagonalize(hamiltonian_for("tat", 50))
    psi0 = coherent_state(50, Direction.MINUS_X)
    t1, t2 = 0.03, 0.11
    stepped = evolve(spectral, evolve(spectral, psi0, t1), t2 - t1)
    direct = evolve(spectral, psi0, t2)
    assert np.allclose(stepped.amplitudes, direct.amplitudes, atol=1e-10)


@pytest.mark.parametrize("n", [6, 7])
def test_pi_rotation_about_z_flips_polarization(n):
    """exp(-i pi S_z) takes the +x coherent state to -x up to a global phase."""
    rotated = evolve(diagonalize(build_collective("z", n)), coherent_state(n, Direction.PLUS_X), np.pi)
    assert rotated.fidelity(coherent_state(n, Direction.MINUS_X)) == pytest.approx(1.0, abs=1e-12)
