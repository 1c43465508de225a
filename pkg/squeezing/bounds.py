# =============================================================================
# FILE: squeezing/bounds.py
# PURPOSE:
#   Closed-form time-complexity exponents for preparing states with
#   F_Q ~ N^(1+gamma) under 1/r^alpha two-body interactions in d dimensions.
#
#   Two sides are tabulated, both as t ~ L^beta with L ~ N^(1/d):
#     - the minimum time any such Hamiltonian needs (the bound side), and
#     - the time reached by the fastest known protocols (recursive GHZ
#       preparation, block GHZ states, two-axis twisting).
#   Logarithmic and sub-polynomial factors are carried as tags, not numbers.
# =============================================================================

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from squeezing.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

BOUNDARY_TOLERANCE = 1e-9


class Regime(str, Enum):
    LINEAR_CONE = "linear-cone"
    POLYNOMIAL = "polynomial"
    LOGARITHMIC = "logarithmic"
    CONSTANT = "constant"
    INVERSE_LOGARITHMIC = "inverse-logarithmic"
    VANISHING_POLYNOMIAL = "vanishing-polynomial"
    SUB_POLYNOMIAL_STRETCH = "sub-polynomial-stretch"


class Correction(str, Enum):
    NONE = "none"
    LOG_FACTOR = "log-factor"
    SUB_POLYNOMIAL_EPSILON = "sub-polynomial-epsilon"


# Regimes whose time dependence is slower than any power of L.
FLAT_REGIMES = {
    Regime.LOGARITHMIC,
    Regime.INVERSE_LOGARITHMIC,
    Regime.CONSTANT,
    Regime.SUB_POLYNOMIAL_STRETCH,
}


class RegimeQuery(BaseModel):
    """Interaction exponent alpha, lattice dimension d and QFI exponent gamma."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., ge=0, allow_inf_nan=False)
    dim: int = Field(..., ge=1)
    gamma: float = Field(..., gt=0, le=1)


def regime_query(alpha: float, dim: int, gamma: float) -> RegimeQuery:
    try:
        return RegimeQuery(alpha=alpha, dim=dim, gamma=gamma)
    except ValidationError as e:
        raise InvalidArgumentError(str(e)) from e


@dataclass(frozen=True)
class ExponentResult:
    """
    t ~ L^beta up to the correction tagged in `correction`.

    Attributes:
        beta: polynomial exponent (the epsilon -> 0 limit where one applies).
        regime: qualitative time dependence.
        correction: multiplicative factor dropped from beta.
        formula_id: which bound or protocol family produced the value.
        kappa: polylog power for logarithmic GHZ regimes, t ~ (log L)^kappa.
        saturating: False where the protocol is known not to meet the bound.
    """

    beta: float
    regime: Regime
    correction: Correction
    formula_id: str
    kappa: Optional[float] = None
    saturating: bool = True


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=BOUNDARY_TOLERANCE)


def bound_exponent(q: RegimeQuery) -> ExponentResult:
    """
    Minimum preparation-time exponent for F_Q ~ N^(1+gamma).

    Boundaries: alpha = 2d+1 joins the 2d < alpha <= 2d+1 branch, alpha = d is
    the L^(d(gamma-1)) / log L branch (checked before alpha = (2-gamma)d, with
    which it coincides at gamma = 1), and alpha = (2-gamma)d is the constant branch.
    """
    a, d, g = q.alpha, q.dim, q.gamma
    critical = (2.0 - g) * d

    if a > 2 * d + 1 and not _close(a, 2 * d + 1):
        return ExponentResult(g, Regime.LINEAR_CONE, Correction.NONE, "bound.short_range")
    if a > 2 * d and not _close(a, 2 * d):
        return ExponentResult(g * (a - 2 * d), Regime.POLYNOMIAL, Correction.SUB_POLYNOMIAL_EPSILON,
                              "bound.short_range")
    if _close(a, d):
        # t ~ L^(d(gamma-1)) / log L, which is 1 / log L at gamma = 1
        regime = Regime.INVERSE_LOGARITHMIC if _close(g, 1.0) else Regime.VANISHING_POLYNOMIAL
        return ExponentResult(d * (g - 1.0), regime, Correction.LOG_FACTOR, "bound.critical")
    if a > critical and not _close(a, critical):
        return ExponentResult(0.0, Regime.LOGARITHMIC, Correction.LOG_FACTOR, "bound.intermediate")
    if _close(a, critical):
        return ExponentResult(0.0, Regime.CONSTANT, Correction.NONE, "bound.intermediate")
    if a > d:
        return ExponentResult((a - critical) / 2.0, Regime.VANISHING_POLYNOMIAL, Correction.NONE,
                              "bound.intermediate")
    return ExponentResult(a - critical, Regime.VANISHING_POLYNOMIAL, Correction.NONE, "bound.long_range")


def protocol_exponent(q: RegimeQuery) -> ExponentResult:
    """
    Preparation-time exponent of the fastest known protocol.

    alpha > d uses recursive GHZ preparation (on blocks of N^gamma spins when
    gamma < 1); alpha <= d uses two-axis twisting, stopped early when gamma < 1.
    """
    a, d, g = q.alpha, q.dim, q.gamma
    ghz_family = "protocol.ghz_recursive" if g == 1.0 else "protocol.ghz_blocks"

    if a > 2 * d + 1 or _close(a, 2 * d + 1):
        return ExponentResult(g, Regime.LINEAR_CONE, Correction.NONE, ghz_family)
    if a > 2 * d and not _close(a, 2 * d):
        return ExponentResult(g * (a - 2 * d), Regime.POLYNOMIAL, Correction.NONE, ghz_family)
    if _close(a, 2 * d):
        return ExponentResult(0.0, Regime.SUB_POLYNOMIAL_STRETCH, Correction.SUB_POLYNOMIAL_EPSILON,
                              ghz_family)
    if a > d and not _close(a, d):
        kappa = math.log(4.0) / math.log(2.0 * d / a)
        critical = (2.0 - g) * d
        beats_bound = a > critical and not _close(a, critical)
        return ExponentResult(0.0, Regime.LOGARITHMIC, Correction.LOG_FACTOR, ghz_family,
                              kappa=kappa, saturating=beats_bound)

    beta = a - d
    regime = Regime.LOGARITHMIC if _close(beta, 0.0) else Regime.VANISHING_POLYNOMIAL
    if g == 1.0:
        return ExponentResult(0.0 if _close(beta, 0.0) else beta, regime, Correction.LOG_FACTOR,
                              "protocol.tat")
    return ExponentResult(0.0 if _close(beta, 0.0) else beta, regime, Correction.LOG_FACTOR,
                          "protocol.tat_early_stop", saturating=False)


def flattened_beta(result: ExponentResult) -> float:
    """Exponent used for comparisons: 0 for every regime slower than a power law."""
    return 0.0 if result.regime in FLAT_REGIMES else result.beta


# =============================================================================
# SATURATION TABLE
# =============================================================================

@dataclass(frozen=True)
class SaturationRow:
    alpha: float
    d: int
    gamma: float
    beta_bound: float
    bound_regime: str
    beta_protocol: float
    protocol_regime: str
    saturated: bool
    open: bool


SATURATION_COLUMNS = [
    "alpha", "d", "gamma", "beta_bound", "bound_regime",
    "beta_protocol", "protocol_regime", "saturated", "open",
]


def alpha_grid(start: float, stop: float, step: float) -> List[float]:
    """Inclusive grid start, start+step, ..., stop rounded to 12 digits."""
    if step <= 0:
        raise InvalidArgumentError(f"grid step must be positive, got {step}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(max(count, 0))]


def saturation_table(d: int, gamma: float, alphas: Iterable[float]) -> List[SaturationRow]:
    """
    Compare bound and protocol exponents along an alpha grid.

    A row is saturated when the flattened exponents agree and the protocol
    branch is not flagged as falling short of the bound. Rows with gamma < 1
    and alpha < (2 - gamma) d are marked open.
    """
    rows = []
    for alpha in alphas:
        q = regime_query(alpha, d, gamma)
        bound = bound_exponent(q)
        protocol = protocol_exponent(q)
        beta_b, beta_p = flattened_beta(bound), flattened_beta(protocol)
        critical = (2.0 - gamma) * d
        rows.append(SaturationRow(
            alpha=float(alpha),
            d=int(d),
            gamma=float(gamma),
            beta_bound=beta_b,
            bound_regime=bound.regime.value,
            beta_protocol=beta_p,
            protocol_regime=protocol.regime.value,
            saturated=bool(_close(beta_b, beta_p) and protocol.saturating),
            open=bool(gamma < 1.0 and alpha < critical and not _close(alpha, critical)),
        ))
    logger.debug("Saturation table d=%d gamma=%g: %d rows", d, gamma, len(rows))
    return rows


def is_saturated_everywhere(rows: List[SaturationRow]) -> bool:
    return bool(np.all([row.saturated for row in rows]))
