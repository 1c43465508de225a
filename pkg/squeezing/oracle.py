# =============================================================================
# FILE: squeezing/oracle.py
# PURPOSE:
#   Brute-force full Hilbert space (2^N, N <= 14) engine used to cross-check
#   the Dicke-subspace simulation and the mixed-state QFI, and to measure how
#   connected correlations spread under power-law lattice Hamiltonians.
#
#   Conventions: site 0 is the most significant tensor factor; |0> is spin up
#   (sigma^z = +1), so the Dicke index k counts zeros in the basis label.
# =============================================================================

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache, reduce
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sparse
from pydantic import BaseModel, ConfigDict, Field
from scipy.sparse.linalg import expm_multiply

from squeezing.collective import Axis, DickeState, Direction
from squeezing.errors import InvalidArgumentError, ResourceLimitError
from squeezing.protocols import DEFAULT_TNT_FIELD_RATIO, ProtocolKind, ProtocolSpec
from squeezing.qfi import WEIGHT_CUTOFF, MixedState, TransverseCovariance

logger = logging.getLogger(__name__)

# =============================================================================
# CONSTANTS
# =============================================================================

MAX_ORACLE_SITES = 14
MAX_ENVELOPE_SITES = 12
DENSE_MAX_DIM = 1024

PAULI = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# sigma^y sigma^z + sigma^z sigma^y on a pair; operator norm 2.
YZ_PAIR = np.kron(PAULI["y"], PAULI["z"]) + np.kron(PAULI["z"], PAULI["y"])


def _check_sites(n_sites: int, limit: int = MAX_ORACLE_SITES) -> int:
    if isinstance(n_sites, bool) or int(n_sites) != n_sites or n_sites < 1:
        raise InvalidArgumentError(f"n_sites must be a positive integer, got {n_sites!r}")
    if n_sites > limit:
        raise ResourceLimitError(f"N={n_sites} exceeds the brute-force limit of {limit} sites")
    return int(n_sites)


# =============================================================================
# STATES AND OPERATORS
# =============================================================================

@dataclass(frozen=True, eq=False)
class FullState:
    """Normalized 2^N amplitude vector."""

    n_spins: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = _check_sites(self.n_spins)
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.shape[0] != 2 ** n:
            raise InvalidArgumentError(f"expected {2 ** n} amplitudes for N={n}, got {amps.shape[0]}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-10:
            raise InvalidArgumentError(f"full state is not normalized (norm^2 = {norm:.3e})")
        amps.setflags(write=False)
        object.__setattr__(self, "n_spins", n)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return 2 ** self.n_spins

    def fidelity(self, other: "FullState") -> float:
        return abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2


def site_operator(op: np.ndarray, site: int, n_sites: int) -> sparse.csr_matrix:
    """`op` acting on one site, identity elsewhere."""
    left = sparse.identity(2 ** site, dtype=complex, format="csr")
    right = sparse.identity(2 ** (n_sites - site - 1), dtype=complex, format="csr")
    return sparse.kron(sparse.kron(left, sparse.csr_matrix(op)), right, format="csr")


@lru_cache(maxsize=32)
def full_collective(axis, n_sites: int) -> sparse.csr_matrix:
    """sum_i sigma_i^axis / 2 as a sparse matrix."""
    pauli = PAULI[Axis(axis).value]
    n = _check_sites(n_sites)
    total = sparse.csr_matrix((2 ** n, 2 ** n), dtype=complex)
    for site in range(n):
        total = total + site_operator(pauli / 2.0, site, n)
    return total.tocsr()


def product_state(thetas: Sequence[float], phis: Sequence[float]) -> FullState:
    """Each site in cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    if len(thetas) != len(phis):
        raise InvalidArgumentError("thetas and phis must have the same length")
    spins = [np.array([math.cos(t / 2.0), np.exp(1j * p) * math.sin(t / 2.0)]) for t, p in zip(thetas, phis)]
    return FullState(len(spins), reduce(np.kron, spins))


def full_coherent_state(n_sites: int, direction=Direction.PLUS_X) -> FullState:
    phi = 0.0 if Direction(direction) is Direction.PLUS_X else math.pi
    return product_state([math.pi / 2.0] * n_sites, [phi] * n_sites)


def ghz_state(n_sites: int) -> FullState:
    """(|0...0> + |1...1>)/sqrt(2)."""
    n = _check_sites(n_sites)
    amps = np.zeros(2 ** n, dtype=complex)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
    return FullState(n, amps)


@lru_cache(maxsize=16)
def symmetric_isometry(n_sites: int) -> sparse.csr_matrix:
    """2^N x (N+1) isometry whose column k is the normalized Dicke state with k up spins."""
    n = _check_sites(n_sites)
    labels = np.arange(2 ** n)
    ups = n - np.array([int(b).bit_count() for b in labels])
    norms = np.array([1.0 / math.sqrt(math.comb(n, int(k))) for k in ups])
    return sparse.csr_matrix((norms.astype(complex), (labels, ups)), shape=(2 ** n, n + 1))


def embed_dicke(state: DickeState) -> FullState:
    return FullState(state.n_spins, symmetric_isometry(state.n_spins) @ state.amplitudes)


def project_to_dicke(state: FullState) -> np.ndarray:
    """Dicke-basis amplitudes P^dagger psi (norm < 1 if psi leaves the symmetric sector)."""
    return symmetric_isometry(state.n_spins).conj().T @ state.amplitudes


def full_protocol_hamiltonian(spec: ProtocolSpec) -> sparse.csr_matrix:
    """Protocol Hamiltonian built from full-space collective operators."""
    n = _check_sites(spec.n_spins)
    s_x, s_y, s_z = (full_collective(axis, n) for axis in ("x", "y", "z"))
    if spec.kind is ProtocolKind.TAT:
        return (spec.chi * (s_y @ s_z + s_z @ s_y)).tocsr()
    twist = spec.chi * (s_z @ s_z)
    if spec.kind is ProtocolKind.OAT:
        return twist.tocsr()
    b_field = spec.b_field if spec.b_field is not None else DEFAULT_TNT_FIELD_RATIO * spec.chi * n
    return (twist - b_field * s_x).tocsr()


# =============================================================================
# LATTICE HAMILTONIANS
# =============================================================================

class Coupling(str, Enum):
    TAT = "tat"
    POWER_LAW = "power_law"
    RANDOM = "random"
    NEAREST_NEIGHBOR = "nearest_neighbor"


class LatticeSpec(BaseModel):
    """Sites on a 1-D chain or 2-D grid with two-body couplings bounded by j0 / r^alpha."""

    model_config = ConfigDict(frozen=True)

    n_sites: int = Field(..., ge=2)
    dim: int = Field(1, ge=1, le=2)
    alpha: float = Field(0.0, ge=0, allow_inf_nan=False)
    coupling: Coupling = Coupling.TAT
    j0: float = Field(1.0, gt=0, allow_inf_nan=False)
    seed: int = 0


def tat_preset(n_sites: int, alpha: float = 0.0, j0: float = 4.0, dim: int = 1) -> LatticeSpec:
    """Uniform sigma-convention TAT; j0 = 4 at alpha = 0 gives pair coupling J = 1."""
    return LatticeSpec(n_sites=n_sites, dim=dim, alpha=alpha, coupling=Coupling.TAT, j0=j0)


@dataclass(frozen=True, eq=False)
class LatticeHamiltonian:
    """
    Attributes:
        spec: the lattice it was built from.
        matrix: sparse 2^N x 2^N Hamiltonian sum_{i<j} h_ij.
        pair_norms: operator norm of every nonzero pair term.
        velocity: max_i sum_j ||h_ij||.
    """

    spec: LatticeSpec
    matrix: sparse.csr_matrix
    pair_norms: Dict[Tuple[int, int], float] = field(default_factory=dict)
    velocity: float = 0.0


def lattice_positions(spec: LatticeSpec) -> np.ndarray:
    """Integer coordinates; 2-D uses the most square w x h factorization of N."""
    n = spec.n_sites
    if spec.dim == 1:
        return np.column_stack([np.arange(n), np.zeros(n)])
    width = next(w for w in range(math.isqrt(n - 1) + 1, n + 1) if n % w == 0) if n > 1 else 1
    return np.column_stack([np.arange(n) % width, np.arange(n) // width]).astype(float)


def _pair_terms(spec: LatticeSpec, positions: np.ndarray):
    pairs = list(combinations(range(spec.n_sites), 2))
    distances = {pair: float(np.linalg.norm(positions[pair[0]] - positions[pair[1]])) for pair in pairs}
    diameter = max(distances.values())
    rng = np.random.default_rng(spec.seed)

    for pair in pairs:
        r = distances[pair]
        limit = spec.j0 / r ** spec.alpha
        if spec.coupling is Coupling.TAT:
            coupling_j = spec.j0 * diameter ** (-spec.alpha) / 4.0
            term = 2.0 * coupling_j * YZ_PAIR
        elif spec.coupling is Coupling.POWER_LAW:
            term = 0.5 * limit * YZ_PAIR
        elif spec.coupling is Coupling.NEAREST_NEIGHBOR:
            if not math.isclose(r, 1.0):
                continue
            term = 0.5 * spec.j0 * YZ_PAIR
            limit = spec.j0
        else:
            g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            term = 0.5 * (g + g.conj().T)
            term *= limit / np.linalg.norm(term, 2)
        yield pair, r, limit, term


def _embed_pair(term: np.ndarray, i: int, j: int, n_sites: int) -> sparse.csr_matrix:
    """Expand a 4x4 pair operator in Pauli strings and place it on sites (i, j)."""
    total = sparse.csr_matrix((2 ** n_sites, 2 ** n_sites), dtype=complex)
    for a, pa in PAULI.items():
        for b, pb in PAULI.items():
            coefficient = np.trace(term @ np.kron(pa, pb)) / 4.0
            if abs(coefficient) < 1e-15:
                continue
            op = site_operator(pa, i, n_sites) @ site_operator(pb, j, n_sites)
            total = total + coefficient * op
    return total


def full_hamiltonian(spec: LatticeSpec) -> LatticeHamiltonian:
    """
    sum_{i<j} h_ij with every ||h_ij|| <= j0 / r_ij^alpha, checked as it is built.

    Raises:
        ResourceLimitError: for more than 14 sites.
        InvalidArgumentError: if a pair term breaks its norm bound.
    """
    n = _check_sites(spec.n_sites)
    positions = lattice_positions(spec)
    matrix = sparse.csr_matrix((2 ** n, 2 ** n), dtype=complex)
    norms: Dict[Tuple[int, int], float] = {}
    for (i, j), r, limit, term in _pair_terms(spec, positions):
        norm = float(np.linalg.norm(term, 2))
        if norm > limit * (1.0 + 1e-12):
            raise InvalidArgumentError(f"pair ({i}, {j}) has norm {norm:.6g} > j0/r^alpha = {limit:.6g}")
        norms[(i, j)] = norm
        matrix = matrix + _embed_pair(term, i, j, n)

    per_site = np.zeros(n)
    for (i, j), norm in norms.items():
        per_site[i] += norm
        per_site[j] += norm
    logger.debug("Built %s lattice N=%d alpha=%g with %d pair terms", spec.coupling.value, n, spec.alpha, len(norms))
    return LatticeHamiltonian(spec, matrix.tocsr(), norms, float(per_site.max()))


# =============================================================================
# EVOLUTION AND OBSERVABLES
# =============================================================================

def _dense_spectrum(hamiltonian) -> Tuple[np.ndarray, np.ndarray]:
    dense = hamiltonian.toarray() if sparse.issparse(hamiltonian) else np.asarray(hamiltonian)
    return np.linalg.eigh(dense)


def _evolve_in_spectrum(spectrum, state: FullState, times: np.ndarray) -> List[FullState]:
    energies, vectors = spectrum
    coefficients = vectors.conj().T @ state.amplitudes
    rows = (np.exp(-1j * np.outer(times, energies)) * coefficients) @ vectors.T
    return [FullState(state.n_spins, row) for row in rows]


def full_evolve(hamiltonian, state: FullState, t: float) -> FullState:
    """exp(-iHt)|psi>: dense eigendecomposition up to dimension 1024, expm_multiply above."""
    return full_evolve_series(hamiltonian, state, [t])[0]


def full_evolve_series(hamiltonian, state: FullState, t_grid: Sequence[float]) -> List[FullState]:
    if hamiltonian.shape != (state.dimension, state.dimension):
        raise InvalidArgumentError(
            f"Hamiltonian of shape {hamiltonian.shape} applied to a {state.dimension}-dimensional state"
        )
    times = np.asarray(t_grid, dtype=float).ravel()
    if not np.all(np.isfinite(times)):
        raise InvalidArgumentError("time grid contains non-finite values")

    if state.dimension <= DENSE_MAX_DIM:
        return _evolve_in_spectrum(_dense_spectrum(hamiltonian), state, times)

    matrix = sparse.csr_matrix(hamiltonian)
    states, current, t_now = [], state.amplitudes, 0.0
    for t in times:
        current = expm_multiply(-1j * (t - t_now) * matrix, current)
        t_now = t
        states.append(FullState(state.n_spins, current / np.linalg.norm(current)))
    return states


def full_transverse_covariance(state: FullState) -> TransverseCovariance:
    """Full-space counterpart of qfi.transverse_covariance."""
    s_y = full_collective("y", state.n_spins)
    s_z = full_collective("z", state.n_spins)
    y_psi = s_y @ state.amplitudes
    z_psi = s_z @ state.amplitudes
    return TransverseCovariance(
        float(np.vdot(y_psi, y_psi).real),
        float(np.vdot(z_psi, z_psi).real),
        float(2.0 * np.vdot(y_psi, z_psi).real),
    )


@dataclass(frozen=True, eq=False)
class CorrelationReport:
    """C_ij = <A_i A_j> - <A_i><A_j> including the diagonal, and its total sum."""

    matrix: np.ndarray
    total: float


def connected_correlations(state: FullState, site_ops: Sequence[np.ndarray]) -> CorrelationReport:
    """
    Connected two-point correlations of one Hermitian operator per site.

    Raises:
        InvalidArgumentError: wrong operator count, non-Hermitian or norm above 1.
    """
    n = state.n_spins
    if len(site_ops) != n:
        raise InvalidArgumentError(f"need {n} site operators, got {len(site_ops)}")
    applied = []
    for site, op in enumerate(site_ops):
        op = np.asarray(op, dtype=complex)
        if op.shape != (2, 2) or not np.allclose(op, op.conj().T, atol=1e-12):
            raise InvalidArgumentError(f"site operator {site} is not a Hermitian 2x2 matrix")
        if np.linalg.norm(op, 2) > 1.0 + 1e-12:
            raise InvalidArgumentError(f"site operator {site} has norm above 1")
        applied.append(site_operator(op, site, n) @ state.amplitudes)

    applied = np.array(applied)
    means = (applied @ state.amplitudes.conj()).real
    products = (applied.conj() @ applied.T).real
    matrix = products - np.outer(means, means)
    return CorrelationReport(matrix, float(matrix.sum()))


def qfi_bruteforce(state: Union[FullState, DickeState, MixedState, np.ndarray], generator) -> float:
    """
    QFI of a state under `generator` without any symmetry reduction.

    Mixed inputs go through dense diagonalization of rho and the full double
    sum over its eigenbasis. Pure vectors use 4 Var(A) directly, which lets
    them reach the full 2^14 oracle space.

    Raises:
        ResourceLimitError: if a mixed rho would exceed 1024 x 1024, or a pure
            vector exceeds 2^14 amplitudes.
    """
    matrix = getattr(generator, "matrix", generator)
    if not sparse.issparse(matrix):
        matrix = np.asarray(matrix, dtype=complex)

    if not isinstance(state, MixedState):
        vector = np.asarray(getattr(state, "amplitudes", state), dtype=complex).ravel()
        limit = 2 ** MAX_ORACLE_SITES
        if vector.shape[0] > limit:
            raise ResourceLimitError(f"pure-state QFI limited to dimension {limit}, got {vector.shape[0]}")
        if matrix.shape != (vector.shape[0], vector.shape[0]):
            raise InvalidArgumentError(f"generator shape {matrix.shape} does not match state {vector.shape}")
        a_psi = matrix @ vector
        mean = np.vdot(vector, a_psi).real
        return float(max(4.0 * (np.vdot(a_psi, a_psi).real - mean ** 2), 0.0))

    dim = state.dimension
    if dim > DENSE_MAX_DIM:
        raise ResourceLimitError(f"dense QFI limited to dimension {DENSE_MAX_DIM}, got {dim}")
    rho = state.density_matrix()
    matrix = matrix.toarray() if sparse.issparse(matrix) else matrix
    if matrix.shape != rho.shape:
        raise InvalidArgumentError(f"generator shape {matrix.shape} does not match rho {rho.shape}")

    weights, vectors = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    weights = np.clip(weights, 0.0, None)
    a_basis = vectors.conj().T @ matrix @ vectors
    lam_mu, lam_nu = weights[:, None], weights[None, :]
    total = lam_mu + lam_nu
    mask = total > WEIGHT_CUTOFF
    terms = np.zeros_like(total)
    terms[mask] = (lam_mu - lam_nu)[mask] ** 2 / total[mask]
    return float(2.0 * np.sum(terms * np.abs(a_basis) ** 2))


# =============================================================================
# CORRELATION SPREADING
# =============================================================================

@dataclass(frozen=True)
class EnvelopeReport:
    """
    Attributes:
        coupling, alpha: lattice family checked.
        n_values: system sizes scanned.
        ratio_by_n: max_{i != j, t, trial} |C_ij(t)| / (v t) for each N.
        relative_slope: d ln(ratio) / d ln N of a straight-line fit, at the mean N.
        distant_pair_max: max |C_{0,N-1}(t)| at the largest N (nearest-neighbour only).
        passed: trend (or suppression) criterion met.
        trials: initial product states examined per N.
        distant_by_trial: per-state max |C_{0,N-1}(t)| at the largest N (nearest-neighbour only).
    """

    coupling: str
    alpha: float
    n_values: Tuple[int, ...]
    ratio_by_n: Tuple[float, ...]
    relative_slope: float
    distant_pair_max: Optional[float]
    passed: bool
    trials: int = 1
    distant_by_trial: Tuple[float, ...] = ()


def _trial_states(n_sites: int, trials: int, seed: int) -> List[FullState]:
    """The +x product state followed by seeded random product states."""
    states = [full_coherent_state(n_sites, Direction.PLUS_X)]
    rng = np.random.default_rng([seed, n_sites])
    for _ in range(max(trials, 1) - 1):
        thetas = np.arccos(rng.uniform(-1.0, 1.0, size=n_sites))
        phis = rng.uniform(0.0, 2.0 * math.pi, size=n_sites)
        states.append(product_state(thetas, phis))
    return states


def correlation_envelope_check(
    spec: LatticeSpec,
    t_grid: Sequence[float],
    trials: int = 3,
    n_values: Sequence[int] = (4, 6, 8, 10),
    seed: int = 0,
    slope_limit: float = 0.1,
    suppression_limit: float = 1e-6,
) -> EnvelopeReport:
    """
    Empirical light-cone checks on product initial states with A_i = sigma_i^z / 2.

    For long-range couplings the ratio max_ij C_ij(t) / (v t) must not grow
    with N (relative slope <= slope_limit). For nearest-neighbour coupling the
    correlation between the two chain ends must stay below suppression_limit.
    Each N is diagonalized once and shared by all `trials` initial states.
    """
    times = np.asarray([t for t in t_grid if t > 0], dtype=float)
    if times.size == 0:
        raise InvalidArgumentError("envelope check needs at least one positive time")
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    sizes = tuple(int(n) for n in n_values)
    for n in sizes:
        _check_sites(n, MAX_ENVELOPE_SITES)

    ratios: List[float] = []
    trial_distant: List[float] = []
    for n in sizes:
        lattice = full_hamiltonian(spec.model_copy(update={"n_sites": n}))
        spectrum = _dense_spectrum(lattice.matrix)
        site_ops = [PAULI["z"] / 2.0] * n
        off_diagonal = ~np.eye(n, dtype=bool)
        worst_ratio = 0.0
        trial_distant = []
        for state in _trial_states(n, trials, seed):
            distant = 0.0
            for t, evolved in zip(times, _evolve_in_spectrum(spectrum, state, times)):
                corr = connected_correlations(evolved, site_ops).matrix
                if lattice.velocity > 0:
                    worst_ratio = max(worst_ratio, float(np.abs(corr[off_diagonal]).max()) / (lattice.velocity * t))
                distant = max(distant, abs(float(corr[0, n - 1])))
            trial_distant.append(distant)
        ratios.append(worst_ratio)
        logger.info("Envelope %s N=%d: ratio %.4g, end-to-end %.3g",
                    spec.coupling.value, n, worst_ratio, max(trial_distant))

    if len(sizes) > 1 and np.mean(ratios) > 0:
        slope = np.polyfit(np.array(sizes, dtype=float), np.array(ratios), 1)[0]
        relative_slope = float(slope * np.mean(sizes) / np.mean(ratios))
    else:
        relative_slope = 0.0

    if spec.coupling is Coupling.NEAREST_NEIGHBOR:
        distant_report = max(trial_distant)
        passed = distant_report <= suppression_limit
        distant_by_trial = tuple(trial_distant)
    else:
        passed = relative_slope <= slope_limit
        distant_report, distant_by_trial = None, ()
    return EnvelopeReport(spec.coupling.value, spec.alpha, sizes, tuple(ratios), relative_slope,
                          distant_report, passed, trials, distant_by_trial)
