# =============================================================================
# FILE: squeezing/verification.py
# PURPOSE:
#   Seeded self-check suites run by `main.py verify`:
#     fvc        QFI never exceeds the variance-based upper bound
#     zeta       the zeta-weighted gap closes bound - QFI exactly
#     convexity  QFI of a two-state mixture stays below the mixed variances,
#                and the spectral QFI agrees with the dense brute force
#     sector     Dicke and full 2^N dynamics give the same QFI trajectory
#     envelope   long-range correlations grow no faster than v t
#     lightcone  nearest-neighbour chains keep distant pairs uncorrelated
# =============================================================================

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from squeezing.collective import DickeState, build_collective
from squeezing.oracle import (
    Coupling,
    LatticeSpec,
    correlation_envelope_check,
    full_coherent_state,
    full_evolve_series,
    full_protocol_hamiltonian,
    full_transverse_covariance,
    qfi_bruteforce,
    tat_preset,
)
from squeezing.protocols import ProtocolKind, characteristic_time, protocol_spec, qfi_trajectory
from squeezing.qfi import (
    MixedState,
    fvc_upper_bound,
    optimal_qfi,
    qfi_mixed,
    qfi_pure,
    zeta_coefficient,
    zeta_gap,
)

logger = logging.getLogger(__name__)

SLACK_TOLERANCE = 1e-9
SECTOR_TOLERANCE = 1e-8
SECTOR_SIZES = (4, 6, 8)
SECTOR_TIMES = 50
MAX_RANDOM_SPINS = 8
MAX_COMPONENTS = 4
LIGHTCONE_LIMIT = 1e-6

SUITE_COLUMNS = ["suite", "trials", "passed", "failed", "worst", "status"]


@dataclass(frozen=True)
class SuiteReport:
    """
    Attributes:
        worst: the least favourable figure of merit seen (suite specific).
    """

    suite: str
    trials: int
    passed: int
    failed: int
    worst: float

    @property
    def status(self) -> str:
        return "PASS" if self.failed == 0 else "FAIL"

    def as_row(self) -> Dict[str, object]:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "passed": self.passed,
            "failed": self.failed,
            "worst": self.worst,
            "status": self.status,
        }


# =============================================================================
# RANDOM STATES
# =============================================================================

def random_mixed_state(rng: np.random.Generator, max_spins: int = MAX_RANDOM_SPINS,
                       max_components: int = MAX_COMPONENTS):
    """A seeded rho on the Dicke space of 2..max_spins spins, with orthonormal components."""
    n = int(rng.integers(2, max_spins + 1))
    dim = n + 1
    k = int(rng.integers(1, min(max_components, dim) + 1))
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(g)
    weights = rng.dirichlet(np.ones(k))
    return n, MixedState(weights, q[:, :k].T, is_eigendecomposition=True)


def random_dicke_state(rng: np.random.Generator, n_spins: int) -> DickeState:
    amps = rng.normal(size=n_spins + 1) + 1j * rng.normal(size=n_spins + 1)
    return DickeState.normalized(n_spins, amps)


def _scale(value: float) -> float:
    return max(1.0, abs(value))


# =============================================================================
# SUITES
# =============================================================================

def fvc_suite(trials: int, seed: int) -> SuiteReport:
    """worst = smallest (bound - QFI) / max(1, bound)."""
    rng = np.random.default_rng([seed, 1])
    failed, worst = 0, np.inf
    for _ in range(trials):
        n, rho = random_mixed_state(rng)
        s_z = build_collective("z", n)
        bound = fvc_upper_bound(rho, s_z)
        slack = (bound - qfi_mixed(rho, s_z)) / _scale(bound)
        worst = min(worst, slack)
        failed += slack < -SLACK_TOLERANCE
    return SuiteReport("fvc", trials, trials - failed, failed, float(worst))


def zeta_suite(trials: int, seed: int) -> SuiteReport:
    """worst = largest |bound - QFI - gap| / max(1, bound); every zeta must be >= 0."""
    rng = np.random.default_rng([seed, 2])
    failed, worst = 0, 0.0
    for _ in range(trials):
        n, rho = random_mixed_state(rng)
        s_z = build_collective("z", n)
        bound = fvc_upper_bound(rho, s_z)
        residual = abs(bound - qfi_mixed(rho, s_z) - zeta_gap(rho, s_z)) / _scale(bound)
        weights = rho.weights
        negative = any(
            zeta_coefficient(a, b) < 0.0
            for a in weights for b in weights if a + b > 0
        )
        worst = max(worst, residual)
        failed += residual > SLACK_TOLERANCE or negative
    return SuiteReport("zeta", trials, trials - failed, failed, float(worst))


def convexity_suite(trials: int, seed: int) -> SuiteReport:
    """worst = largest convexity violation or spectral/brute-force disagreement, relative."""
    rng = np.random.default_rng([seed, 3])
    failed, worst = 0, 0.0
    for _ in range(trials):
        n = int(rng.integers(2, MAX_RANDOM_SPINS + 1))
        s_z = build_collective("z", n)
        a, b = random_dicke_state(rng, n), random_dicke_state(rng, n)
        p = float(rng.uniform(0.05, 0.95))
        rho_matrix = (p * np.outer(a.amplitudes, a.amplitudes.conj())
                      + (1 - p) * np.outer(b.amplitudes, b.amplitudes.conj()))
        rho = MixedState.from_density_matrix(rho_matrix)

        mixture = qfi_mixed(rho, s_z)
        ceiling = p * qfi_pure(a, s_z) + (1 - p) * qfi_pure(b, s_z)
        excess = (mixture - ceiling) / _scale(ceiling)
        disagreement = abs(mixture - qfi_bruteforce(rho, s_z)) / _scale(mixture)
        worst = max(worst, excess, disagreement)
        failed += excess > SLACK_TOLERANCE or disagreement > SLACK_TOLERANCE
    return SuiteReport("convexity", trials, trials - failed, failed, float(worst))


def sector_suite(trials: int, seed: int) -> SuiteReport:
    """One trial per (protocol, N); worst = largest |F_dicke - F_full| / max(1, F)."""
    failed, worst, count = 0, 0.0, 0
    for kind in ProtocolKind:
        for n in SECTOR_SIZES:
            spec = protocol_spec(kind, n)
            grid = np.linspace(0.0, 5.0 * characteristic_time(kind, n), SECTOR_TIMES)
            dicke = [record.f_q for record in qfi_trajectory(spec, grid)]
            states = full_evolve_series(full_protocol_hamiltonian(spec),
                                        full_coherent_state(n, spec.initial_direction), grid)
            full = [optimal_qfi(full_transverse_covariance(state)).f_q for state in states]
            deviation = max(abs(x - y) / _scale(y) for x, y in zip(dicke, full))
            worst = max(worst, deviation)
            failed += deviation > SECTOR_TOLERANCE
            count += 1
    return SuiteReport("sector", count, count - failed, failed, float(worst))


def envelope_suite(trials: int, seed: int) -> SuiteReport:
    """
    All-to-all TAT chain at alpha = 0; worst = fitted relative slope of the ratio.

    The slope is one verdict over the max across every trial state, so all
    `trials` states pass or fail together.
    """
    report = correlation_envelope_check(
        tat_preset(4, alpha=0.0, j0=1.0),
        t_grid=np.linspace(0.005, 0.05, 10),
        trials=trials,
        n_values=(4, 6, 8, 10),
        seed=seed,
    )
    passed = report.trials if report.passed else 0
    return SuiteReport("envelope", report.trials, passed, report.trials - passed, report.relative_slope)


def lightcone_suite(trials: int, seed: int) -> SuiteReport:
    """Nearest-neighbour chain of 8; worst = largest end-to-end |C| for t <= 0.1, judged per trial state."""
    report = correlation_envelope_check(
        LatticeSpec(n_sites=8, coupling=Coupling.NEAREST_NEIGHBOR, j0=1.0),
        t_grid=np.linspace(0.01, 0.1, 10),
        trials=trials,
        n_values=(8,),
        seed=seed,
        suppression_limit=LIGHTCONE_LIMIT,
    )
    failed = sum(distant > LIGHTCONE_LIMIT for distant in report.distant_by_trial)
    return SuiteReport("lightcone", report.trials, report.trials - failed, failed, report.distant_pair_max)


SUITES: Dict[str, Callable[[int, int], SuiteReport]] = {
    "fvc": fvc_suite,
    "zeta": zeta_suite,
    "convexity": convexity_suite,
    "sector": sector_suite,
    "envelope": envelope_suite,
    "lightcone": lightcone_suite,
}


def run_suites(names: List[str], trials: int = 100, seed: int = 0) -> List[SuiteReport]:
    """Run the named suites ("all" expands to every suite) in a fixed order."""
    if "all" in names:
        names = list(SUITES)
    reports = []
    for name in names:
        report = SUITES[name](trials, seed)
        logger.info("Suite %s: %d/%d passed (worst %.3g)", name, report.passed, report.trials, report.worst)
        reports.append(report)
    return reports
