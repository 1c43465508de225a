# =============================================================================
# FILE: squeezing/collective.py
# PURPOSE:
#   Collective spin operators and spin-coherent states on the symmetric
#   (S = N/2) Dicke subspace of N spin-1/2 particles.
#
#   Basis ordering is ascending m = -N/2 ... +N/2, so index k = m + N/2 counts
#   the spins pointing up. Operators are kept in full banded storage
#   band[u + i - j, j] = M[i, j] with half-bandwidth u, which is both the
#   scipy.sparse "dia" layout and (rows 0..u) the eig_banded upper layout.
# =============================================================================

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Iterable, Tuple, Union

import numpy as np
import scipy.sparse as sparse
from scipy.special import gammaln, xlogy

from squeezing.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# =============================================================================
# CONSTANTS
# =============================================================================

MAX_DICKE_SPINS = 100_000
NORM_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-12


class Axis(str, Enum):
    X = "x"
    Y = "y"
    Z = "z"


class Direction(str, Enum):
    PLUS_X = "+x"
    MINUS_X = "-x"


def check_n_spins(n_spins, minimum: int = 1) -> int:
    """Validate a spin count and return it as a plain int."""
    if isinstance(n_spins, bool) or not isinstance(n_spins, (int, np.integer)):
        raise InvalidArgumentError(f"n_spins must be an integer, got {n_spins!r}")
    if n_spins < minimum:
        raise InvalidArgumentError(f"n_spins must be >= {minimum}, got {n_spins}")
    if n_spins > MAX_DICKE_SPINS:
        raise InvalidArgumentError(
            f"n_spins={n_spins} exceeds the Dicke dimension cap of {MAX_DICKE_SPINS}"
        )
    return int(n_spins)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True, eq=False)
class DickeState:
    """Normalized amplitude vector over |S=N/2, m>, ascending m."""

    n_spins: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = check_n_spins(self.n_spins)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.shape[0] != n + 1:
            raise InvalidArgumentError(
                f"expected {n + 1} amplitudes for N={n}, got shape {amps.shape}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidArgumentError(f"state is not normalized (norm^2 = {norm:.3e})")
        object.__setattr__(self, "n_spins", n)
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def normalized(cls, n_spins: int, amplitudes) -> "DickeState":
        """Build a state after rescaling `amplitudes` to unit norm."""
        amps = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise InvalidArgumentError("cannot normalize a zero vector")
        return cls(n_spins, amps / norm)

    @property
    def dimension(self) -> int:
        return self.n_spins + 1

    def overlap(self, other: "DickeState") -> complex:
        if other.n_spins != self.n_spins:
            raise InvalidArgumentError("overlap between states of different N")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "DickeState") -> float:
        return abs(self.overlap(other)) ** 2


@dataclass(frozen=True, eq=False)
class CollectiveOperator:
    """
    Hermitian operator on the Dicke subspace in full banded storage.

    Attributes:
        n_spins: N, so the matrix dimension is N + 1.
        band: array of shape (2u + 1, N + 1) with band[u + i - j, j] = M[i, j].
    """

    n_spins: int
    band: np.ndarray

    def __post_init__(self):
        n = check_n_spins(self.n_spins)
        band = np.asarray(self.band, dtype=complex)
        if band.ndim != 2 or band.shape[0] % 2 != 1 or band.shape[1] != n + 1:
            raise InvalidArgumentError(
                f"band must have shape (2u+1, {n + 1}), got {band.shape}"
            )
        object.__setattr__(self, "n_spins", n)
        object.__setattr__(self, "band", _frozen(band))

        matrix = self.matrix
        scale = max(1.0, float(np.abs(band).max(initial=0.0)))
        residue = abs(matrix - matrix.conj().T)
        worst = float(residue.max()) if residue.nnz else 0.0
        if worst > HERMITIAN_TOLERANCE * scale:
            raise InvalidArgumentError(f"operator is not Hermitian (max residue {worst:.3e})")

    @property
    def dimension(self) -> int:
        return self.n_spins + 1

    @property
    def half_bandwidth(self) -> int:
        return (self.band.shape[0] - 1) // 2

    @cached_property
    def matrix(self) -> sparse.csr_matrix:
        u = self.half_bandwidth
        offsets = np.arange(u, -u - 1, -1)
        return sparse.dia_matrix((np.array(self.band), offsets), shape=(self.dimension,) * 2).tocsr()

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def upper_band(self) -> np.ndarray:
        """Rows 0..u of the band, the upper form expected by scipy.linalg.eig_banded."""
        return np.ascontiguousarray(self.band[: self.half_bandwidth + 1])

    def matvec(self, vector: np.ndarray) -> np.ndarray:
        return self.matrix @ vector

    def scaled(self, factor: float) -> "CollectiveOperator":
        return CollectiveOperator(self.n_spins, self.band * float(factor))

    @classmethod
    def from_sparse(cls, n_spins: int, matrix) -> "CollectiveOperator":
        """Convert a square (N+1)-dimensional matrix into banded storage."""
        n = check_n_spins(n_spins)
        csr = sparse.csr_matrix(matrix, dtype=complex, copy=True)
        if csr.shape != (n + 1, n + 1):
            raise InvalidArgumentError(f"expected a {(n + 1, n + 1)} matrix, got {csr.shape}")
        csr.eliminate_zeros()
        coo = csr.tocoo()
        offsets = coo.col - coo.row
        u = int(np.abs(offsets).max()) if offsets.size else 0
        band = np.zeros((2 * u + 1, n + 1), dtype=complex)
        for offset in range(-u, u + 1):
            diagonal = csr.diagonal(offset)
            start = max(offset, 0)
            band[u - offset, start:start + diagonal.size] = diagonal
        return cls(n, band)


Scalar = Union[int, float]


def linear_combination(terms: Iterable[Tuple[Scalar, CollectiveOperator]]) -> CollectiveOperator:
    """Return sum_k c_k * A_k for real coefficients, padding to the widest band."""
    terms = list(terms)
    if not terms:
        raise InvalidArgumentError("linear_combination needs at least one term")
    n = terms[0][1].n_spins
    if any(op.n_spins != n for _, op in terms):
        raise InvalidArgumentError("linear_combination of operators with different N")
    u = max(op.half_bandwidth for _, op in terms)
    band = np.zeros((2 * u + 1, n + 1), dtype=complex)
    for coefficient, op in terms:
        shift = u - op.half_bandwidth
        band[shift:shift + op.band.shape[0]] += float(coefficient) * op.band
    return CollectiveOperator(n, band)


# =============================================================================
# OPERATIONS
# =============================================================================

def _ladder_elements(n_spins: int) -> np.ndarray:
    """<m+1|S_+|m> for m = -S ... S-1."""
    s = n_spins / 2.0
    m = np.arange(n_spins) - s
    return np.sqrt((s - m) * (s + m + 1.0))


@lru_cache(maxsize=64)
def _collective_cached(axis: Axis, n_spins: int) -> CollectiveOperator:
    dim = n_spins + 1
    if axis is Axis.Z:
        band = (np.arange(dim) - n_spins / 2.0).reshape(1, dim)
        return CollectiveOperator(n_spins, band)

    ladder = _ladder_elements(n_spins)
    band = np.zeros((3, dim), dtype=complex)
    if axis is Axis.X:
        band[0, 1:] = ladder / 2.0
        band[2, :-1] = ladder / 2.0
    else:
        # S_y = (S_+ - S_-) / 2i
        band[0, 1:] = 0.5j * ladder
        band[2, :-1] = -0.5j * ladder
    return CollectiveOperator(n_spins, band)


def build_collective(axis, n_spins: int) -> CollectiveOperator:
    """
    Matrix of S_axis in the Dicke basis.

    Args:
        axis: "x", "y" or "z" (or an Axis member).
        n_spins: N >= 1.

    Returns:
        CollectiveOperator: diagonal for z, tridiagonal for x and y.
    """
    try:
        axis = Axis(axis)
    except ValueError as exc:
        raise InvalidArgumentError(f"unknown axis {axis!r}") from exc
    return _collective_cached(axis, check_n_spins(n_spins))


def spin_operators(n_spins: int) -> Tuple[CollectiveOperator, CollectiveOperator, CollectiveOperator]:
    """(S_x, S_y, S_z) for N spins."""
    return tuple(build_collective(axis, n_spins) for axis in (Axis.X, Axis.Y, Axis.Z))


def symmetrized_product(a: CollectiveOperator, b: CollectiveOperator) -> CollectiveOperator:
    """AB + BA, banded with half-bandwidth at most u_A + u_B."""
    if a.n_spins != b.n_spins:
        raise InvalidArgumentError(
            f"symmetrized_product of operators with N={a.n_spins} and N={b.n_spins}"
        )
    product = a.matrix @ b.matrix + b.matrix @ a.matrix
    return CollectiveOperator.from_sparse(a.n_spins, product)


def coherent_state(n_spins: int, direction=Direction.PLUS_X) -> DickeState:
    """
    Product state of N spins along +x or -x, expressed in the Dicke basis.

    Amplitudes are sqrt(C(N, k)) / 2^(N/2) with k = m + N/2; the -x state
    carries an extra sign (-1)^k.
    """
    n = check_n_spins(n_spins)
    try:
        direction = Direction(direction)
    except ValueError as exc:
        raise InvalidArgumentError(f"unknown direction {direction!r}") from exc

    k = np.arange(n + 1)
    log_amp = 0.5 * (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)) - 0.5 * n * np.log(2.0)
    amplitudes = np.exp(log_amp).astype(complex)
    if direction is Direction.MINUS_X:
        amplitudes *= np.where(k % 2 == 0, 1.0, -1.0)
    return DickeState.normalized(n, amplitudes)


def coherent_state_angles(n_spins: int, theta: float, phi: float) -> DickeState:
    """
    Spin-coherent state with every spin in cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>.

    theta is the polar angle from +z and phi the azimuth from +x.
    """
    n = check_n_spins(n_spins)
    k = np.arange(n + 1)
    log_binom = 0.5 * (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))
    log_mag = log_binom + xlogy(k, abs(np.cos(theta / 2.0))) + xlogy(n - k, abs(np.sin(theta / 2.0)))
    sign = np.sign(np.cos(theta / 2.0)) ** k * np.sign(np.sin(theta / 2.0)) ** (n - k)
    amplitudes = sign * np.exp(log_mag) * np.exp(1j * (n - k) * phi)
    return DickeState.normalized(n, amplitudes)


def expectation(state: DickeState, op: CollectiveOperator) -> float:
    """<psi|op|psi>, checked to be real."""
    if state.n_spins != op.n_spins:
        raise InvalidArgumentError(
            f"expectation of an N={op.n_spins} operator in an N={state.n_spins} state"
        )
    value = complex(np.vdot(state.amplitudes, op.matvec(state.amplitudes)))
    if abs(value.imag) > HERMITIAN_TOLERANCE * max(1.0, abs(value.real)):
        raise InvalidArgumentError(f"expectation has imaginary residue {value.imag:.3e}")
    return value.real
