# =============================================================================
# FILE: test_oracle.py
# PURPOSE:
#   Pytest suite for the brute-force 2^N engine: symmetric-sector embedding,
#   Dicke-vs-full dynamics, dense QFI, lattice Hamiltonians and the
#   correlation-spreading checks.
# =============================================================================

import math

import numpy as np
import pytest

from squeezing.collective import Direction, build_collective, coherent_state
from squeezing.errors import InvalidArgumentError, ResourceLimitError
from squeezing.oracle import (
    PAULI,
    Coupling,
    FullState,
    LatticeSpec,
    connected_correlations,
    correlation_envelope_check,
    embed_dicke,
    full_coherent_state,
    full_collective,
    full_evolve,
    full_evolve_series,
    full_hamiltonian,
    full_protocol_hamiltonian,
    full_transverse_covariance,
    ghz_state,
    lattice_positions,
    project_to_dicke,
    qfi_bruteforce,
    symmetric_isometry,
    tat_preset,
)
from squeezing.protocols import ProtocolKind, characteristic_time, hamiltonian_for, protocol_spec, qfi_trajectory
from squeezing.qfi import MixedState, optimal_qfi, qfi_mixed, qfi_pure
from squeezing.verification import random_mixed_state


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_collective_operators_restrict_to_dicke_matrices(axis):
    """P^dagger S_axis P reproduces the banded Dicke operator."""
    p = symmetric_isometry(5).toarray()
    restricted = p.conj().T @ full_collective(axis, 5).toarray() @ p
    assert np.allclose(restricted, build_collective(axis, 5).to_dense(), atol=1e-12)


def test_isometry_is_orthonormal():
    """The Dicke columns are orthonormal."""
    p = symmetric_isometry(6).toarray()
    assert np.allclose(p.conj().T @ p, np.eye(7), atol=1e-12)


def test_coherent_states_agree_up_to_phase():
    """Embedding the Dicke -x state gives the full -x product state."""
    for n in (3, 4):
        embedded = embed_dicke(coherent_state(n, Direction.MINUS_X))
        assert embedded.fidelity(full_coherent_state(n, Direction.MINUS_X)) == pytest.approx(1.0)
    back = project_to_dicke(full_coherent_state(6, Direction.PLUS_X))
    assert np.allclose(back, coherent_state(6, Direction.PLUS_X).amplitudes, atol=1e-12)


@pytest.mark.parametrize("kind", list(ProtocolKind))
@pytest.mark.parametrize("n", [4, 6, 8])
def test_dicke_matches_full_dynamics(kind, n):
    """Theta-optimized QFI from the Dicke sector equals the full 2^N result."""
    spec = protocol_spec(kind, n)
    grid = np.linspace(0.0, 5.0 * characteristic_time(kind, n), 50)
    dicke = [record.f_q for record in qfi_trajectory(spec, grid)]
    states = full_evolve_series(full_protocol_hamiltonian(spec), full_coherent_state(n, Direction.MINUS_X), grid)
    full = [optimal_qfi(full_transverse_covariance(state)).f_q for state in states]
    assert np.allclose(dicke, full, rtol=1e-8, atol=1e-8)


def _swap_sites(n_sites, i, j):
    """Basis permutation exchanging sites i and j; site 0 is the most significant bit."""
    index = np.arange(2 ** n_sites)
    bit_i, bit_j = n_sites - 1 - i, n_sites - 1 - j
    differ = ((index >> bit_i) & 1) != ((index >> bit_j) & 1)
    return np.where(differ, index ^ ((1 << bit_i) | (1 << bit_j)), index)


@pytest.mark.parametrize("kind", list(ProtocolKind))
def test_trajectories_are_site_permutation_symmetric(kind):
    """Swapping any two sites leaves every state of a collective protocol run unchanged."""
    n = 6
    spec = protocol_spec(kind, n)
    grid = np.linspace(0.0, 3.0 * characteristic_time(kind, n), 12)
    states = full_evolve_series(full_protocol_hamiltonian(spec), full_coherent_state(n, Direction.MINUS_X), grid)
    for i, j in [(0, 1), (0, 5), (2, 4)]:
        perm = _swap_sites(n, i, j)
        for state in states:
            assert np.allclose(state.amplitudes[perm], state.amplitudes, atol=1e-10)


def test_full_evolution_stays_symmetric():
    """Collective dynamics never leave the symmetric sector."""
    spec = protocol_spec("tnt", 6)
    state = full_evolve(full_protocol_hamiltonian(spec), full_coherent_state(6, Direction.MINUS_X), 0.7)
    assert np.linalg.norm(project_to_dicke(state)) == pytest.approx(1.0, abs=1e-10)


def test_ghz_brute_force_qfi():
    """GHZ reaches N^2 for the collective S_z."""
    assert qfi_bruteforce(ghz_state(7), full_collective("z", 7)) == pytest.approx(49.0)


def test_brute_force_matches_pure_formula():
    """Dense QFI of a pure Dicke state is 4 Var(A)."""
    state = coherent_state(5, Direction.MINUS_X)
    s_z = build_collective("z", 5)
    assert qfi_bruteforce(state, s_z) == pytest.approx(qfi_pure(state, s_z))


@pytest.mark.parametrize("seed", range(10))
def test_brute_force_matches_spectral_sum(seed):
    """Dense double sum and the null-space-folded spectral sum agree."""
    n, rho = random_mixed_state(np.random.default_rng(seed))
    s_z = build_collective("z", n)
    assert qfi_bruteforce(rho, s_z) == pytest.approx(qfi_mixed(rho, s_z), rel=1e-9, abs=1e-9)


def test_brute_force_size_limit():
    """Mixed states above 1024 amplitudes and pure states above 2^14 are refused."""
    vector = np.ones(2048) / math.sqrt(2048)
    with pytest.raises(ResourceLimitError):
        qfi_bruteforce(MixedState.from_pure(vector), np.eye(2048))
    with pytest.raises(ResourceLimitError):
        qfi_bruteforce(np.ones(2 ** 15) / math.sqrt(2 ** 15), np.eye(2))


def test_brute_force_pure_state_reaches_oracle_limit():
    """Pure states beyond 1024 amplitudes are handled up to the 14-site limit."""
    assert qfi_bruteforce(ghz_state(12), full_collective("z", 12)) == pytest.approx(144.0)
    assert qfi_bruteforce(full_coherent_state(14), full_collective("z", 14)) == pytest.approx(14.0)


def test_site_limit():
    """More than 14 sites is refused."""
    with pytest.raises(ResourceLimitError):
        full_collective("z", 15)
    with pytest.raises(ResourceLimitError):
        full_hamiltonian(LatticeSpec(n_sites=15))


def test_full_state_validation():
    """Wrong length or norm is rejected."""
    with pytest.raises(InvalidArgumentError):
        FullState(2, np.ones(3) / math.sqrt(3))
    with pytest.raises(InvalidArgumentError):
        FullState(2, np.ones(4))


def test_tat_preset_projects_onto_twisting():
    """With j0 = 4 the Pauli-convention all-to-all lattice is 4 chi (S_y S_z + S_z S_y)."""
    n = 5
    lattice = full_hamiltonian(tat_preset(n))
    p = symmetric_isometry(n).toarray()
    projected = p.conj().T @ lattice.matrix.toarray() @ p
    assert np.allclose(projected, 4.0 * hamiltonian_for("tat", n).to_dense(), atol=1e-10)
    assert lattice.velocity == pytest.approx(4.0 * (n - 1))


@pytest.mark.parametrize("coupling", [Coupling.POWER_LAW, Coupling.RANDOM, Coupling.TAT])
@pytest.mark.parametrize("dim", [1, 2])
def test_pair_norms_respect_power_law(coupling, dim):
    """Every pair term obeys ||h_ij|| <= j0 / r^alpha."""
    spec = LatticeSpec(n_sites=6, dim=dim, alpha=1.5, coupling=coupling, j0=2.0, seed=7)
    positions = lattice_positions(spec)
    lattice = full_hamiltonian(spec)
    assert len(lattice.pair_norms) == 15
    for (i, j), norm in lattice.pair_norms.items():
        r = float(np.linalg.norm(positions[i] - positions[j]))
        assert norm <= 2.0 / r ** 1.5 * (1 + 1e-12)
    assert np.allclose(lattice.matrix.toarray(), lattice.matrix.toarray().conj().T)


def test_nearest_neighbour_keeps_adjacent_pairs():
    """A chain of 6 has 5 bonds."""
    lattice = full_hamiltonian(LatticeSpec(n_sites=6, coupling=Coupling.NEAREST_NEIGHBOR))
    assert sorted(lattice.pair_norms) == [(i, i + 1) for i in range(5)]


def test_square_grid_layout():
    """Six sites in 2-D form a 3 x 2 grid."""
    positions = lattice_positions(LatticeSpec(n_sites=6, dim=2))
    assert positions[:, 0].max() == 2
    assert positions[:, 1].max() == 1


def test_product_state_has_no_cross_correlations():
    """Off-diagonal C_ij vanish on a product state; the diagonal is the local variance."""
    report = connected_correlations(full_coherent_state(5), [PAULI["z"] / 2.0] * 5)
    off_diagonal = report.matrix[~np.eye(5, dtype=bool)]
    assert np.allclose(off_diagonal, 0.0, atol=1e-12)
    assert np.allclose(np.diag(report.matrix), 0.25)
    assert report.total == pytest.approx(1.25)


@pytest.mark.parametrize("n", [3, 6])
def test_ghz_correlations_sum_to_n_squared_over_4(n):
    """GHZ with A_i = sigma_z / 2: C_total = N^2 / 4 and 4 C_total is the brute-force QFI."""
    state = ghz_state(n)
    report = connected_correlations(state, [PAULI["z"] / 2.0] * n)
    assert report.total == pytest.approx(n * n / 4.0)
    assert np.allclose(report.matrix, 0.25)
    assert 4.0 * report.total == pytest.approx(qfi_bruteforce(state, full_collective("z", n)), rel=1e-9)


def test_correlation_sum_is_collective_variance():
    """sum_ij C_ij equals Var(S_z) for an entangled state."""
    lattice = full_hamiltonian(tat_preset(6, j0=1.0))
    state = full_evolve(lattice.matrix, full_coherent_state(6), 0.3)
    s_z = full_collective("z", 6)
    z_psi = s_z @ state.amplitudes
    variance = np.vdot(z_psi, z_psi).real - np.vdot(state.amplitudes, z_psi).real ** 2
    report = connected_correlations(state, [PAULI["z"] / 2.0] * 6)
    assert report.total == pytest.approx(variance, abs=1e-10)


def test_correlation_operator_validation():
    """Non-Hermitian or oversized site operators are rejected."""
    state = full_coherent_state(2)
    with pytest.raises(InvalidArgumentError):
        connected_correlations(state, [PAULI["z"], np.array([[0, 1], [0, 0]])])
    with pytest.raises(InvalidArgumentError):
        connected_correlations(state, [PAULI["z"], 2 * PAULI["x"]])
    with pytest.raises(InvalidArgumentError):
        connected_correlations(state, [PAULI["z"]])


def test_long_range_envelope_does_not_grow():
    """All-to-all coupling: max C_ij / (v t) shows no upward trend in N."""
    report = correlation_envelope_check(
        tat_preset(4, alpha=0.0, j0=1.0),
        t_grid=np.linspace(0.005, 0.05, 10),
        n_values=(4, 6, 8, 10),
    )
    assert report.passed
    assert report.relative_slope <= 0.1
    assert all(ratio > 0 for ratio in report.ratio_by_n)


def test_nearest_neighbour_light_cone():
    """The ends of an 8-site chain stay uncorrelated at short times."""
    report = correlation_envelope_check(
        LatticeSpec(n_sites=8, coupling=Coupling.NEAREST_NEIGHBOR),
        t_grid=np.linspace(0.01, 0.1, 10),
        n_values=(8,),
    )
    assert report.passed
    assert report.distant_pair_max <= 1e-6


def test_envelope_needs_positive_times():
    """A grid of only t = 0 is rejected."""
    with pytest.raises(InvalidArgumentError):
        correlation_envelope_check(tat_preset(4), t_grid=[0.0])
