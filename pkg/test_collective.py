# =============================================================================
# FILE: test_collective.py
# PURPOSE:
#   Pytest suite for Dicke-basis collective operators and spin-coherent states.
# =============================================================================

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezing.collective import (
    CollectiveOperator,
    DickeState,
    Direction,
    build_collective,
    coherent_state,
    coherent_state_angles,
    expectation,
    linear_combination,
    spin_operators,
    symmetrized_product,
)
from squeezing.errors import InvalidArgumentError


@pytest.mark.parametrize("n", [1, 2, 5, 10, 50])
def test_commutation_relations(n):
    """[S_x, S_y] = i S_z and cyclic permutations hold on the Dicke subspace."""
    s_x, s_y, s_z = (op.to_dense() for op in spin_operators(n))
    tol = 1e-12 * max(1.0, n * n / 4.0)
    assert np.abs(s_x @ s_y - s_y @ s_x - 1j * s_z).max() < tol
    assert np.abs(s_y @ s_z - s_z @ s_y - 1j * s_x).max() < tol
    assert np.abs(s_z @ s_x - s_x @ s_z - 1j * s_y).max() < tol


@pytest.mark.parametrize("n", [1, 4, 9, 30])
def test_total_spin_is_maximal(n):
    """S_x^2 + S_y^2 + S_z^2 = S(S+1) with S = N/2."""
    s_x, s_y, s_z = (op.to_dense() for op in spin_operators(n))
    total = s_x @ s_x + s_y @ s_y + s_z @ s_z
    s = n / 2.0
    assert np.allclose(total, s * (s + 1) * np.eye(n + 1), atol=1e-10 * max(1.0, n * n))


def test_sz_is_diagonal_ascending():
    """S_z eigenvalues run from -N/2 to N/2."""
    s_z = build_collective("z", 4)
    assert s_z.half_bandwidth == 0
    assert np.allclose(np.diag(s_z.to_dense()).real, [-2, -1, 0, 1, 2])


def test_ladder_matrix_elements():
    """<m+1|S_x|m> = sqrt((S-m)(S+m+1)) / 2 for N = 2."""
    s_x = build_collective("x", 2).to_dense()
    assert s_x[1, 0] == pytest.approx(math.sqrt(2) / 2)
    assert s_x[2, 1] == pytest.approx(math.sqrt(2) / 2)
    assert s_x[0, 2] == 0


@pytest.mark.parametrize("direction,sign", [(Direction.PLUS_X, 1.0), (Direction.MINUS_X, -1.0)])
def test_coherent_state_moments(direction, sign):
    """Coherent states along +/-x have <S_x> = +/-N/2 and transverse variance N/4."""
    n = 40
    state = coherent_state(n, direction)
    s_x, s_y, s_z = spin_operators(n)
    assert expectation(state, s_x) == pytest.approx(sign * n / 2)
    assert expectation(state, s_y) == pytest.approx(0.0, abs=1e-10)
    y_psi = s_y.matvec(state.amplitudes)
    assert np.vdot(y_psi, y_psi).real == pytest.approx(n / 4)
    z_psi = s_z.matvec(state.amplitudes)
    assert np.vdot(z_psi, z_psi).real == pytest.approx(n / 4)


def test_coherent_state_large_n_is_normalized():
    """Amplitudes built in log space stay finite and normalized at N = 10000."""
    n = 10_000
    state = coherent_state(n, Direction.MINUS_X)
    assert np.all(np.isfinite(state.amplitudes))
    assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-10)
    assert expectation(state, build_collective("x", n)) == pytest.approx(-n / 2, rel=1e-10)


def test_coherent_state_angles_matches_x_states():
    """theta = pi/2 with phi = 0 or pi reproduces the +x and -x states."""
    n = 12
    plus = coherent_state_angles(n, math.pi / 2, 0.0)
    minus = coherent_state_angles(n, math.pi / 2, math.pi)
    assert plus.fidelity(coherent_state(n, Direction.PLUS_X)) == pytest.approx(1.0)
    assert minus.fidelity(coherent_state(n, Direction.MINUS_X)) == pytest.approx(1.0)


def test_coherent_state_angles_pole():
    """theta = 0 is the all-up Dicke state."""
    state = coherent_state_angles(6, 0.0, 0.3)
    assert abs(state.amplitudes[-1]) == pytest.approx(1.0)


def test_dicke_state_validation():
    """Wrong length or norm is rejected."""
    with pytest.raises(InvalidArgumentError):
        DickeState(3, np.ones(3))
    with pytest.raises(InvalidArgumentError):
        DickeState(3, np.ones(4))
    state = DickeState.normalized(3, np.ones(4))
    assert state.dimension == 4
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.0


def test_invalid_operator_requests():
    """Unknown axes, N < 1 and non-Hermitian bands are rejected."""
    with pytest.raises(InvalidArgumentError):
        build_collective("w", 4)
    with pytest.raises(InvalidArgumentError):
        build_collective("z", 0)
    band = np.zeros((3, 3), dtype=complex)
    band[0, 1:] = 1.0
    with pytest.raises(InvalidArgumentError):
        CollectiveOperator(2, band)


def test_symmetrized_product_of_sz():
    """{S_z, S_z} = 2 S_z^2 stays diagonal."""
    s_z = build_collective("z", 6)
    twist = symmetrized_product(s_z, s_z)
    assert twist.half_bandwidth == 0
    assert np.allclose(np.diag(twist.to_dense()).real, 2 * (np.arange(7) - 3.0) ** 2)


def test_symmetrized_product_bandwidth():
    """{S_y, S_z} has half-bandwidth 1 and {S_x, S_x} has half-bandwidth 2."""
    s_x, s_y, s_z = spin_operators(8)
    assert symmetrized_product(s_y, s_z).half_bandwidth == 1
    assert symmetrized_product(s_x, s_x).half_bandwidth == 2


def test_linear_combination_pads_bands():
    """Mixing a diagonal and a tridiagonal operator matches the dense sum."""
    s_x, _, s_z = spin_operators(5)
    combo = linear_combination([(2.0, s_z), (-0.5, s_x)])
    assert combo.half_bandwidth == 1
    assert np.allclose(combo.to_dense(), 2.0 * s_z.to_dense() - 0.5 * s_x.to_dense())


def test_from_sparse_detects_bandwidth():
    """Converting a dense pentadiagonal matrix recovers its band."""
    s_x = build_collective("x", 6).to_dense()
    op = CollectiveOperator.from_sparse(6, s_x @ s_x)
    assert op.half_bandwidth == 2
    assert np.allclose(op.to_dense(), s_x @ s_x)


def test_upper_band_layout():
    """upper_band keeps the rows eig_banded reads."""
    s_x = build_collective("x", 4)
    upper = s_x.upper_band()
    assert upper.shape == (2, 5)
    assert np.allclose(upper[0, 1:], np.diag(s_x.to_dense(), 1))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(min_value=1, max_value=20), seed=st.integers(min_value=0, max_value=2**16))
def test_sz_expectation_in_range(n, seed):
    """<S_z> of any state lies in [-N/2, N/2]."""
    rng = np.random.default_rng(seed)
    state = DickeState.normalized(n, rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
    value = expectation(state, build_collective("z", n))
    assert -n / 2 - 1e-12 <= value <= n / 2 + 1e-12
