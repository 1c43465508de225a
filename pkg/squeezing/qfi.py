# =============================================================================
# FILE: squeezing/qfi.py
# PURPOSE:
#   Quantum Fisher information for pure and mixed states, the optimal
#   transverse measurement axis for x-polarized squeezed states, the
#   variance-based (correlation) upper bound on the mixed-state QFI, and the
#   quantum Cramer-Rao error floor.
# =============================================================================

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import scipy.sparse as sparse

from squeezing.collective import (
    CollectiveOperator,
    DickeState,
    expectation,
    spin_operators,
)
from squeezing.errors import InvalidArgumentError, SymmetryViolationError

logger = logging.getLogger(__name__)

# =============================================================================
# CONSTANTS
# =============================================================================

WEIGHT_CUTOFF = 1e-12
ORTHONORMAL_TOLERANCE = 1e-9
ISOTROPIC_TOLERANCE = 1e-12

Generator = Union[CollectiveOperator, np.ndarray, sparse.spmatrix]


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class TransverseCovariance:
    """Second moments <S_y^2>, <S_z^2> and <S_y S_z + S_z S_y>."""

    syy: float
    szz: float
    cross: float

    def __post_init__(self):
        scale = max(1.0, abs(self.syy), abs(self.szz))
        if self.syy < -1e-12 * scale or self.szz < -1e-12 * scale:
            raise InvalidArgumentError(f"negative second moment in {self}")
        if abs(self.cross) > 2.0 * math.sqrt(max(self.syy, 0.0) * max(self.szz, 0.0)) + 1e-9 * scale:
            raise InvalidArgumentError(f"cross moment violates Cauchy-Schwarz in {self}")


@dataclass(frozen=True)
class QfiAtAngle:
    """Maximal F_Q over the transverse angle and the angle that attains it."""

    theta_opt: float
    f_q: float


@dataclass(frozen=True, eq=False)
class MixedState:
    """
    rho = sum_mu weights[mu] |components[mu]><components[mu]|.

    Attributes:
        weights: probabilities, summing to 1.
        components: array of shape (K, dim), one pure state per row.
        is_eigendecomposition: True when the rows came from diagonalizing rho.
    """

    weights: np.ndarray
    components: np.ndarray
    is_eigendecomposition: bool = False

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float).ravel()
        components = np.atleast_2d(np.array(self.components, dtype=complex))
        if components.shape[0] != weights.shape[0]:
            raise InvalidArgumentError(
                f"{weights.shape[0]} weights for {components.shape[0]} components"
            )
        if np.any(weights < -WEIGHT_CUTOFF):
            raise InvalidArgumentError("weights must be non-negative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidArgumentError(f"weights sum to {weights.sum():.15g}, not 1")
        for name, array in (("weights", weights), ("components", components)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if self.is_eigendecomposition:
            _check_orthonormal(components)

    @property
    def dimension(self) -> int:
        return self.components.shape[1]

    def density_matrix(self) -> np.ndarray:
        return (self.components.T * self.weights) @ self.components.conj()

    @classmethod
    def from_pure(cls, amplitudes) -> "MixedState":
        return cls(np.ones(1), np.asarray(amplitudes, dtype=complex).reshape(1, -1), True)

    @classmethod
    def from_density_matrix(cls, rho: np.ndarray) -> "MixedState":
        """Eigendecompose rho, dropping eigenvalues below the weight cutoff."""
        rho = np.asarray(rho, dtype=complex)
        eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (rho + rho.conj().T))
        keep = eigenvalues > WEIGHT_CUTOFF
        weights = eigenvalues[keep]
        return cls(weights / weights.sum(), eigenvectors[:, keep].T, True)


def _check_orthonormal(components: np.ndarray) -> None:
    gram = components.conj() @ components.T
    deviation = np.abs(gram - np.eye(gram.shape[0])).max(initial=0.0)
    if deviation > ORTHONORMAL_TOLERANCE:
        raise InvalidArgumentError(f"components are not orthonormal (max deviation {deviation:.3e})")


def _as_matrix(generator: Generator):
    if isinstance(generator, CollectiveOperator):
        return generator.matrix
    return generator


# =============================================================================
# TRANSVERSE MOMENTS AND OPTIMAL ANGLE
# =============================================================================

def mean_spin(state: DickeState) -> Tuple[float, float, float]:
    """(<S_x>, <S_y>, <S_z>)."""
    return tuple(expectation(state, op) for op in spin_operators(state.n_spins))


def transverse_covariance(
    state: DickeState,
    check_z2: bool = False,
    tolerance: Optional[float] = None,
) -> TransverseCovariance:
    """
    Second moments of S_y and S_z in `state`.

    Args:
        state: normalized Dicke state.
        check_z2: when True, require |<S_y>|, |<S_z>| <= tolerance.
        tolerance: symmetry tolerance, default 1e-8 * N.

    Raises:
        SymmetryViolationError: if check_z2 is set and a transverse mean is nonzero.
    """
    _, s_y, s_z = spin_operators(state.n_spins)
    psi = state.amplitudes
    y_psi = s_y.matvec(psi)
    z_psi = s_z.matvec(psi)

    if check_z2:
        limit = 1e-8 * state.n_spins if tolerance is None else tolerance
        mean_y = np.vdot(psi, y_psi).real
        mean_z = np.vdot(psi, z_psi).real
        if abs(mean_y) > limit or abs(mean_z) > limit:
            raise SymmetryViolationError(
                f"transverse mean spin (<S_y>={mean_y:.3e}, <S_z>={mean_z:.3e}) exceeds {limit:.1e}"
            )

    syy = float(np.vdot(y_psi, y_psi).real)
    szz = float(np.vdot(z_psi, z_psi).real)
    cross = float(2.0 * np.vdot(y_psi, z_psi).real)
    return TransverseCovariance(syy, szz, cross)


def qfi_at_angle(cov: TransverseCovariance, theta: float) -> float:
    """F_Q(theta) = 4[cos^2 syy + sin^2 szz + sin cos cross]."""
    c, s = math.cos(theta), math.sin(theta)
    return 4.0 * (c * c * cov.syy + s * s * cov.szz + s * c * cov.cross)


def _anisotropy(cov: TransverseCovariance) -> float:
    return math.hypot(cov.syy - cov.szz, cov.cross)


def optimal_qfi(cov: TransverseCovariance) -> QfiAtAngle:
    """
    Closed-form maximum of F_Q(theta) over the transverse angle.

    The isotropic case (syy == szz, cross == 0) resolves to theta = 0.
    """
    radius = _anisotropy(cov)
    f_q = 2.0 * ((cov.syy + cov.szz) + radius)
    if radius <= ISOTROPIC_TOLERANCE * max(1.0, cov.syy + cov.szz):
        return QfiAtAngle(0.0, f_q)
    theta = (0.5 * math.atan2(cov.cross, cov.syy - cov.szz)) % math.pi
    if theta >= math.pi:
        theta -= math.pi
    return QfiAtAngle(theta, f_q)


def min_variance(cov: TransverseCovariance) -> float:
    """Smallest variance of cos(theta) S_y + sin(theta) S_z over theta."""
    return max(0.0, 0.5 * ((cov.syy + cov.szz) - _anisotropy(cov)))


def squeezing_parameter(cov: TransverseCovariance, mean_x: float, n_spins: int) -> float:
    """
    Wineland parameter xi_R^2 = N * Var_min / <S_x>^2.

    Values below 1 flag metrologically useful squeezing; a coherent state gives 1.
    """
    if mean_x == 0.0:
        return math.inf
    return n_spins * min_variance(cov) / (mean_x * mean_x)


# =============================================================================
# QUANTUM FISHER INFORMATION
# =============================================================================

def qfi_pure(state: DickeState, generator: CollectiveOperator) -> float:
    """4 Var(A) for a pure state."""
    if state.n_spins != generator.n_spins:
        raise InvalidArgumentError("state and generator have different N")
    a_psi = generator.matvec(state.amplitudes)
    mean = np.vdot(state.amplitudes, a_psi).real
    second = np.vdot(a_psi, a_psi).real
    return max(0.0, 4.0 * float(second - mean * mean))


def _spectral_terms(rho: MixedState, generator: Generator):
    """Positive weights, the generator in that basis, and <A^2> per component."""
    _check_orthonormal(rho.components)
    matrix = _as_matrix(generator)
    if matrix.shape != (rho.dimension, rho.dimension):
        raise InvalidArgumentError(
            f"generator of shape {matrix.shape} does not act on dimension {rho.dimension}"
        )
    keep = rho.weights > WEIGHT_CUTOFF
    weights = rho.weights[keep]
    vectors = rho.components[keep]
    a_vectors = (matrix @ vectors.T).T
    a_matrix = vectors.conj() @ a_vectors.T
    a_squared = np.einsum("ij,ij->i", a_vectors.conj(), a_vectors).real
    return weights, a_matrix, a_squared


def qfi_mixed(rho: MixedState, generator: Generator) -> float:
    """
    Mixed-state QFI from the spectral sum, with the null space of rho folded
    into 4 sum_mu lambda_mu (<A^2>_mu - sum_{nu in support} |A_mu,nu|^2).

    Raises:
        InvalidArgumentError: if the components are not orthonormal.
    """
    weights, a_matrix, a_squared = _spectral_terms(rho, generator)
    lam_mu = weights[:, None]
    lam_nu = weights[None, :]
    abs2 = np.abs(a_matrix) ** 2
    support = 2.0 * np.sum((lam_mu - lam_nu) ** 2 / (lam_mu + lam_nu) * abs2)
    null_space = 4.0 * np.sum(weights * (a_squared - abs2.sum(axis=1)))
    return float(support + null_space)


def fvc_upper_bound(rho: MixedState, generator: Generator) -> float:
    """4 sum_mu lambda_mu Var_mu(A), an upper bound on qfi_mixed."""
    weights, a_matrix, a_squared = _spectral_terms(rho, generator)
    means = np.diag(a_matrix).real
    return float(4.0 * np.sum(weights * (a_squared - means ** 2)))


def zeta_coefficient(lambda_mu: float, lambda_nu: float) -> float:
    """lambda_mu + lambda_nu - (lambda_mu - lambda_nu)^2 / (lambda_mu + lambda_nu)."""
    if lambda_mu < 0 or lambda_nu < 0:
        raise InvalidArgumentError("zeta_coefficient needs non-negative weights")
    total = lambda_mu + lambda_nu
    if total <= 0:
        raise InvalidArgumentError("zeta_coefficient is undefined when both weights vanish")
    return total - (lambda_mu - lambda_nu) ** 2 / total


def zeta_gap(rho: MixedState, generator: Generator) -> float:
    """2 sum_{mu != nu} zeta_mu,nu |A_mu,nu|^2, which closes fvc_upper_bound - qfi_mixed."""
    weights, a_matrix, _ = _spectral_terms(rho, generator)
    lam_mu = weights[:, None]
    lam_nu = weights[None, :]
    zeta = 4.0 * lam_mu * lam_nu / (lam_mu + lam_nu)
    np.fill_diagonal(zeta, 0.0)
    return float(2.0 * np.sum(zeta * np.abs(a_matrix) ** 2))


def cramer_rao(f_q: float, m_repetitions: int = 1) -> float:
    """Smallest phase error 1/sqrt(M F_Q) reachable with M repetitions."""
    if not f_q > 0:
        raise InvalidArgumentError(f"f_q must be positive, got {f_q}")
    if isinstance(m_repetitions, bool) or int(m_repetitions) != m_repetitions or m_repetitions < 1:
        raise InvalidArgumentError(f"m_repetitions must be a positive integer, got {m_repetitions}")
    return 1.0 / math.sqrt(m_repetitions * f_q)

