# =============================================================================
# FILE: squeezing/dynamics.py
# PURPOSE:
#   Exact time evolution of Dicke states under a time-independent collective
#   Hamiltonian. One banded eigendecomposition per Hamiltonian is reused for
#   every time point, so psi(t) = V exp(-i Lambda t) V^dagger psi costs O(dim^2).
# =============================================================================

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.linalg import eig_banded

from squeezing.collective import CollectiveOperator, DickeState
from squeezing.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralForm:
    """
    Eigendecomposition H = V diag(eigenvalues) V^dagger of a collective Hamiltonian.

    Attributes:
        n_spins: N of the Dicke subspace.
        eigenvalues: ascending real energies.
        eigenvectors: unitary matrix whose columns are the eigenvectors.
    """

    n_spins: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        for name in ("eigenvalues", "eigenvectors"):
            array = np.array(getattr(self, name), copy=True)
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def dimension(self) -> int:
        return self.n_spins + 1

    def reconstruct(self) -> np.ndarray:
        """Dense V Lambda V^dagger."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def propagator(self, t: float) -> np.ndarray:
        """Dense exp(-iHt)."""
        v = self.eigenvectors
        return (v * np.exp(-1j * self.eigenvalues * t)) @ v.conj().T


def diagonalize(hamiltonian: CollectiveOperator) -> SpectralForm:
    """
    Full spectral decomposition of a banded Hermitian Hamiltonian.

    Diagonal Hamiltonians are sorted directly; everything else goes through
    scipy.linalg.eig_banded on the upper band.
    """
    dim = hamiltonian.dimension
    if hamiltonian.half_bandwidth == 0:
        diagonal = hamiltonian.band[0]
        if np.abs(diagonal.imag).max(initial=0.0) > 1e-12 * max(1.0, np.abs(diagonal).max()):
            raise InvalidArgumentError("diagonal Hamiltonian has complex entries")
        order = np.argsort(diagonal.real, kind="stable")
        eigenvectors = np.eye(dim, dtype=complex)[:, order]
        return SpectralForm(hamiltonian.n_spins, diagonal.real[order], eigenvectors)

    eigenvalues, eigenvectors = eig_banded(hamiltonian.upper_band(), lower=False)
    logger.debug(
        "Diagonalized N=%d Hamiltonian (half-bandwidth %d), spectrum [%.6g, %.6g]",
        hamiltonian.n_spins, hamiltonian.half_bandwidth, eigenvalues[0], eigenvalues[-1],
    )
    return SpectralForm(hamiltonian.n_spins, eigenvalues, eigenvectors.astype(complex))


def _check_compatible(spec: SpectralForm, state: DickeState) -> None:
    if spec.n_spins != state.n_spins:
        raise InvalidArgumentError(
            f"spectral form for N={spec.n_spins} applied to an N={state.n_spins} state"
        )


def evolve(spec: SpectralForm, state: DickeState, t: float) -> DickeState:
    """Return exp(-iHt)|psi> with t in units of 1/chi."""
    _check_compatible(spec, state)
    if not math.isfinite(t):
        raise InvalidArgumentError(f"time must be finite, got {t}")
    v = spec.eigenvectors
    coefficients = v.conj().T @ state.amplitudes
    amplitudes = v @ (np.exp(-1j * spec.eigenvalues * t) * coefficients)
    return DickeState(state.n_spins, amplitudes)


def evolve_series(spec: SpectralForm, state0: DickeState, t_grid: Sequence[float]) -> List[DickeState]:
    """
    States at every time of a non-decreasing grid, all from the same spectral form.

    Raises:
        InvalidArgumentError: if the grid is unsorted or contains non-finite times.
    """
    _check_compatible(spec, state0)
    times = np.asarray(t_grid, dtype=float).ravel()
    if not np.all(np.isfinite(times)):
        raise InvalidArgumentError("time grid contains non-finite values")
    if np.any(np.diff(times) < 0):
        raise InvalidArgumentError("time grid must be ascending")

    v = spec.eigenvectors
    coefficients = v.conj().T @ state0.amplitudes
    phases = np.exp(-1j * np.outer(times, spec.eigenvalues)) * coefficients
    rows = phases @ v.T
    return [DickeState(state0.n_spins, row) for row in rows]
