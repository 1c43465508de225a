# =============================================================================
# FILE: squeezing/protocols.py
# PURPOSE:
#   The three collective squeezing protocols (two-axis twisting, twist-and-turn,
#   one-axis twisting): Hamiltonian construction, theta-optimized QFI
#   trajectories, the optimal squeezing-time search, the early-time analytic
#   TAT model and the (protocol, N) sweep driver.
#
#   Times are in units of 1/chi unless stated otherwise.
# =============================================================================

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from scipy.optimize import minimize_scalar

from squeezing.collective import (
    CollectiveOperator,
    DickeState,
    Direction,
    check_n_spins,
    coherent_state,
    linear_combination,
    spin_operators,
    symmetrized_product,
)
from squeezing.dynamics import SpectralForm, diagonalize, evolve, evolve_series
from squeezing.errors import (
    InvalidArgumentError,
    ResourceLimitError,
    SearchWindowExhaustedError,
)
from squeezing.qfi import (
    TransverseCovariance,
    optimal_qfi,
    squeezing_parameter,
    transverse_covariance,
)
from utils.job_runner import run_jobs

logger = logging.getLogger(__name__)

# =============================================================================
# CONSTANTS
# =============================================================================

# Twist-and-turn field B = ratio * chi * N (Lambda = chi N / B = 2).
DEFAULT_TNT_FIELD_RATIO = 0.5

COARSE_GRID_POINTS = 256
SEARCH_WINDOW = (0.05, 5.0)
REFINE_REL_TOL = 1e-4
DEFAULT_MAX_SPINS = 2000


class ProtocolKind(str, Enum):
    TAT = "tat"
    TNT = "tnt"
    OAT = "oat"


class SearchObjective(str, Enum):
    SQUEEZING = "squeezing"
    QFI = "qfi"


# =============================================================================
# DATA MODELS
# =============================================================================

class ProtocolSpec(BaseModel):
    """One simulation run: protocol, N, chi, field and initial polarization."""

    model_config = ConfigDict(frozen=True)

    kind: ProtocolKind
    n_spins: int = Field(..., ge=2, le=100_000)
    chi: float = Field(1.0, gt=0, allow_inf_nan=False)
    b_field: Optional[float] = Field(None, allow_inf_nan=False)
    initial_direction: Direction = Direction.MINUS_X

    @model_validator(mode="before")
    @classmethod
    def _default_tnt_field(cls, data):
        if not isinstance(data, dict) or data.get("b_field") is not None:
            return data
        try:
            is_tnt = ProtocolKind(data.get("kind")) is ProtocolKind.TNT
            n_spins = int(data["n_spins"])
            chi = float(data.get("chi", 1.0))
        except (KeyError, TypeError, ValueError):
            return data
        if is_tnt:
            data = {**data, "b_field": DEFAULT_TNT_FIELD_RATIO * chi * n_spins}
        return data

    @model_validator(mode="after")
    def _field_only_for_tnt(self):
        if self.kind is ProtocolKind.TNT and self.b_field is None:
            raise ValueError("twist-and-turn needs a b_field")
        if self.kind is not ProtocolKind.TNT and self.b_field is not None:
            raise ValueError(f"b_field is only meaningful for tnt, not {self.kind.value}")
        return self


def protocol_spec(kind, n_spins: int, chi: float = 1.0, b_field: Optional[float] = None,
                  initial_direction=Direction.MINUS_X) -> ProtocolSpec:
    """Build a ProtocolSpec, reporting bad fields as InvalidArgumentError."""
    try:
        return ProtocolSpec(kind=kind, n_spins=n_spins, chi=chi, b_field=b_field,
                            initial_direction=initial_direction)
    except ValidationError as e:
        raise InvalidArgumentError(str(e)) from e


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    covariance: TransverseCovariance
    f_q: float
    theta_opt: float
    mean_x: float
    xi_squared: float


@dataclass(frozen=True)
class OptimalResult:
    kind: ProtocolKind
    n_spins: int
    t_opt: float
    f_q_opt: float
    theta_opt: float
    xi_squared: float
    evaluations: int
    objective: SearchObjective = SearchObjective.SQUEEZING


@dataclass(frozen=True)
class SweepOutcome:
    """One row of a sweep; exactly one of `result` and `error` is set."""

    kind: ProtocolKind
    n_spins: int
    chi: float
    b_field: Optional[float]
    result: Optional[OptimalResult] = None
    error: Optional[str] = None


# =============================================================================
# HAMILTONIANS
# =============================================================================

def hamiltonian_for(kind, n_spins: int, chi: float = 1.0, b_field: Optional[float] = None) -> CollectiveOperator:
    """
    Banded Dicke-basis Hamiltonian of a protocol.

    TAT: chi (S_y S_z + S_z S_y); OAT: chi S_z^2; TnT: chi S_z^2 - B S_x.
    Accepts N = 1, where the TAT Hamiltonian vanishes identically.
    """
    try:
        kind = ProtocolKind(kind)
    except ValueError as e:
        raise InvalidArgumentError(f"unknown protocol {kind!r}") from e
    n = check_n_spins(n_spins)
    if not (math.isfinite(chi) and chi > 0):
        raise InvalidArgumentError(f"chi must be positive and finite, got {chi}")

    s_x, s_y, s_z = spin_operators(n)
    if kind is ProtocolKind.TAT:
        return symmetrized_product(s_y, s_z).scaled(chi)

    twist = symmetrized_product(s_z, s_z).scaled(chi / 2.0)
    if kind is ProtocolKind.OAT:
        return twist
    if b_field is None:
        b_field = DEFAULT_TNT_FIELD_RATIO * chi * n
    return linear_combination([(1.0, twist), (-b_field, s_x)])


def build_protocol_hamiltonian(spec: ProtocolSpec) -> CollectiveOperator:
    return hamiltonian_for(spec.kind, spec.n_spins, spec.chi, spec.b_field)


def heisenberg_limit_time(n_spins: int) -> float:
    """ln(N)/N, the chi t_opt schedule of Heisenberg-limited twisting."""
    n = check_n_spins(n_spins, minimum=2)
    return math.log(n) / n


def characteristic_time(kind, n_spins: int, chi: float = 1.0) -> float:
    """Search scale t_g: ln(N)/N for TAT and TnT, N^(-2/3) for OAT, divided by chi."""
    kind = ProtocolKind(kind)
    if kind is ProtocolKind.OAT:
        return n_spins ** (-2.0 / 3.0) / chi
    return heisenberg_limit_time(n_spins) / chi


# =============================================================================
# TRAJECTORIES
# =============================================================================

class ProtocolRun:
    """Diagonalized protocol plus its initial state, reused across all times."""

    def __init__(self, spec: ProtocolSpec):
        self.spec = spec
        self.hamiltonian = build_protocol_hamiltonian(spec)
        self.spectral: SpectralForm = diagonalize(self.hamiltonian)
        self.initial_state = coherent_state(spec.n_spins, spec.initial_direction)
        self.s_x = spin_operators(spec.n_spins)[0]
        logger.debug("Prepared %s run for N=%d", spec.kind.value, spec.n_spins)

    def record(self, t: float, state: DickeState, check_z2: bool = True) -> TrajectoryRecord:
        cov = transverse_covariance(state, check_z2=check_z2)
        best = optimal_qfi(cov)
        mean_x = float(np.vdot(state.amplitudes, self.s_x.matvec(state.amplitudes)).real)
        xi = squeezing_parameter(cov, mean_x, state.n_spins)
        return TrajectoryRecord(float(t), cov, best.f_q, best.theta_opt, mean_x, xi)

    def record_at(self, t: float, check_z2: bool = True) -> TrajectoryRecord:
        return self.record(t, evolve(self.spectral, self.initial_state, t), check_z2)

    def trajectory(self, t_grid: Sequence[float], check_z2: bool = True) -> List[TrajectoryRecord]:
        states = evolve_series(self.spectral, self.initial_state, t_grid)
        return [self.record(t, state, check_z2) for t, state in zip(np.asarray(t_grid, dtype=float), states)]


def qfi_trajectory(spec: ProtocolSpec, t_grid: Sequence[float], check_z2: bool = True) -> List[TrajectoryRecord]:
    """
    Theta-optimized QFI along an ascending time grid.

    Raises:
        InvalidArgumentError: for an unsorted or non-finite grid.
        SymmetryViolationError: if <S_y> or <S_z> leaves zero by more than 1e-8 N.
    """
    return ProtocolRun(spec).trajectory(t_grid, check_z2)


# =============================================================================
# OPTIMAL TIME SEARCH
# =============================================================================

def _objective_value(record: TrajectoryRecord, objective: SearchObjective) -> float:
    if objective is SearchObjective.SQUEEZING:
        return record.xi_squared
    return -record.f_q


def _first_interior_minimum(values: np.ndarray) -> Optional[int]:
    for i in range(1, len(values) - 1):
        if values[i] < values[i - 1] and values[i] <= values[i + 1]:
            return i
    return None


def find_optimal(
    spec: ProtocolSpec,
    objective=SearchObjective.SQUEEZING,
    grid_points: int = COARSE_GRID_POINTS,
    window: Tuple[float, float] = SEARCH_WINDOW,
    rel_tol: float = REFINE_REL_TOL,
    max_spins: int = DEFAULT_MAX_SPINS,
) -> OptimalResult:
    """
    Locate the optimal squeezing time of a protocol.

    A coarse scan over [window[0] * t_g, window[1] * t_g] picks the earliest
    interior local minimum of the objective (the squeezing parameter xi_R^2 by
    default, or -F_Q), which golden-section search then refines to a relative
    time tolerance `rel_tol`. F_Q and theta are reported at the refined time.

    Raises:
        ResourceLimitError: if N exceeds `max_spins`.
        SearchWindowExhaustedError: if the scan has no interior minimum.
    """
    objective = SearchObjective(objective)
    if spec.n_spins > max_spins:
        raise ResourceLimitError(f"N={spec.n_spins} exceeds the configured cap of {max_spins}")
    if grid_points < 3:
        raise InvalidArgumentError("the coarse scan needs at least 3 points")

    run = ProtocolRun(spec)
    t_g = characteristic_time(spec.kind, spec.n_spins, spec.chi)
    grid = np.linspace(window[0] * t_g, window[1] * t_g, grid_points)
    records = run.trajectory(grid)
    values = np.array([_objective_value(r, objective) for r in records])

    i = _first_interior_minimum(values)
    if i is None:
        edges = (records[0], records[-1])
        shown = [r.xi_squared if objective is SearchObjective.SQUEEZING else r.f_q for r in edges]
        raise SearchWindowExhaustedError(
            f"no interior {objective.value} optimum for {spec.kind.value} N={spec.n_spins} "
            f"in [{grid[0]:.4g}, {grid[-1]:.4g}]",
            t_lower=float(grid[0]), t_upper=float(grid[-1]),
            value_lower=shown[0], value_upper=shown[1],
        )

    t_best, extra = float(grid[i]), 0
    if values[i] < values[i + 1]:
        try:
            refined = minimize_scalar(
                lambda t: _objective_value(run.record_at(t), objective),
                bracket=(grid[i - 1], grid[i], grid[i + 1]),
                method="golden",
                options={"xtol": rel_tol},
            )
            extra = int(refined.nfev)
            if grid[i - 1] <= refined.x <= grid[i + 1] and refined.fun <= values[i]:
                t_best = float(refined.x)
        except ValueError as e:
            logger.debug("Golden refinement skipped for %s N=%d: %s", spec.kind.value, spec.n_spins, e)

    best = run.record_at(t_best)
    logger.info(
        "%s N=%d: t_opt=%.6g F_Q=%.6g xi^2=%.4g",
        spec.kind.value, spec.n_spins, t_best, best.f_q, best.xi_squared,
    )
    return OptimalResult(
        kind=spec.kind,
        n_spins=spec.n_spins,
        t_opt=t_best,
        f_q_opt=best.f_q,
        theta_opt=best.theta_opt,
        xi_squared=best.xi_squared,
        evaluations=grid_points + extra,
        objective=objective,
    )


# =============================================================================
# EARLY-TIME TAT MODEL AND TIME UNITS
# =============================================================================

def tat_early_time_model(n_spins: int, t: float) -> float:
    """
    Approximate TAT QFI N exp(2Nt - sinh(2Nt)/N + t/sqrt(N)) for t << 1/sqrt(N).

    `t` is the model time chi * t_chi (see model_time_from_dicke and
    model_time_from_sigma). Late times drive the exponent to -inf, so the
    model decays to 0.0, including when sinh(2Nt) overflows.
    """
    if n_spins < 2:
        raise InvalidArgumentError(f"the early-time model needs N >= 2, got {n_spins}")
    if not (math.isfinite(t) and t >= 0):
        raise InvalidArgumentError(f"time must be finite and non-negative, got {t}")
    x = 2.0 * n_spins * t
    try:
        exponent = x - math.sinh(x) / n_spins + t / math.sqrt(n_spins)
    except OverflowError:
        return 0.0
    return n_spins * math.exp(exponent)


def model_time_from_dicke(t: float, chi: float = 1.0) -> float:
    """Model time for a Dicke run under chi (S_y S_z + S_z S_y)."""
    return chi * t


def model_time_from_sigma(t_sigma: float, coupling_j: float = 1.0) -> float:
    """Model time for J sum_ij (sigma_i^y sigma_j^z + sigma_i^z sigma_j^y), i.e. chi = 4J."""
    return 4.0 * coupling_j * t_sigma


# =============================================================================
# SWEEP
# =============================================================================

def _sweep_job(payload) -> OptimalResult:
    spec, objective, max_spins = payload
    return find_optimal(spec, objective=objective, max_spins=max_spins)


def sweep(
    kinds: Sequence,
    n_values: Sequence[int],
    chi: float = 1.0,
    jobs: int = 1,
    objective=SearchObjective.SQUEEZING,
    max_spins: int = DEFAULT_MAX_SPINS,
    show_progress: bool = False,
    b_field: Optional[float] = None,
    initial_direction=Direction.MINUS_X,
) -> List[SweepOutcome]:
    """
    find_optimal over every (kind, N), merged in (kind, N) order.

    `b_field` applies to twist-and-turn rows only; the other kinds ignore it.
    Per-row failures, including specs that do not validate, are recorded on
    the outcome instead of aborting the sweep.
    """
    objective = SearchObjective(objective)
    rows: List[SweepOutcome] = []
    specs: List[ProtocolSpec] = []
    for name in kinds:
        try:
            kind = ProtocolKind(name)
        except ValueError as e:
            raise InvalidArgumentError(f"unknown protocol {name!r}") from e
        tnt_field = b_field if kind is ProtocolKind.TNT else None
        for n in n_values:
            try:
                specs.append(protocol_spec(kind, n, chi, tnt_field, initial_direction))
            except InvalidArgumentError as e:
                logger.warning("Skipping %s N=%s: %s", kind.value, n, e)
                rows.append(SweepOutcome(kind, int(n), chi, tnt_field, error=f"{type(e).__name__}: {e}"))

    payloads = [(spec, objective, max_spins) for spec in specs]
    outcomes = run_jobs(_sweep_job, payloads, jobs=jobs, description="Sweeping", show_progress=show_progress)
    rows.extend(
        SweepOutcome(spec.kind, spec.n_spins, spec.chi, spec.b_field,
                     result=outcome.value if outcome.ok else None,
                     error=None if outcome.ok else outcome.error)
        for spec, outcome in zip(specs, outcomes)
    )
    order = {kind: position for position, kind in enumerate(ProtocolKind)}
    rows.sort(key=lambda row: (order[row.kind], row.n_spins))
    return rows
