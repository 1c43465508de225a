# =============================================================================
# FILE: squeezing/fitting.py
# PURPOSE:
#   One-parameter scaling-law fits y = A * f(N) with a fixed basis f, used to
#   compare optimal times and QFI from a sweep with published amplitudes.
# =============================================================================

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from squeezing.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


class ModelForm(str, Enum):
    POWER = "power"
    LOG_OVER_N = "log_over_n"


class ScalingModel(BaseModel):
    """A * N^exponent (power) or A * ln(N)/N (log_over_n)."""

    model_config = ConfigDict(frozen=True)

    form: ModelForm
    exponent: Optional[float] = Field(None, allow_inf_nan=False)

    @model_validator(mode="after")
    def _exponent_matches_form(self):
        if self.form is ModelForm.POWER and self.exponent is None:
            raise ValueError("power models need an exponent")
        if self.form is ModelForm.LOG_OVER_N and self.exponent is not None:
            raise ValueError("log_over_n models take no exponent")
        return self

    def basis(self, n_values) -> np.ndarray:
        n = np.asarray(n_values, dtype=float)
        if self.form is ModelForm.LOG_OVER_N:
            return np.log(n) / n
        return n ** self.exponent

    @property
    def label(self) -> str:
        if self.form is ModelForm.LOG_OVER_N:
            return "A*ln(N)/N"
        return f"A*N^{self.exponent:g}"


def power_model(exponent: float) -> ScalingModel:
    return ScalingModel(form=ModelForm.POWER, exponent=exponent)


LOG_OVER_N = ScalingModel(form=ModelForm.LOG_OVER_N)


@dataclass(frozen=True)
class FitResult:
    model: ScalingModel
    amplitude: float
    std_error: float
    residual_rms: float
    n_points: int

    def relative_deviation(self, reference: float) -> float:
        return abs(self.amplitude - reference) / abs(reference)


def fit_amplitude(data: Iterable[Tuple[float, float]], model: ScalingModel) -> FitResult:
    """
    Least squares for the single amplitude A in y = A f(N).

    A = sum f y / sum f^2; std_error = sqrt(s^2 / sum f^2) with the residual
    variance s^2 taken over n - 1 degrees of freedom.

    Raises:
        InvalidArgumentError: fewer than 2 points, repeated or too small N,
            non-positive y, or a basis that is not positive everywhere.
    """
    points = sorted((float(n), float(y)) for n, y in data)
    if len(points) < 2:
        raise InvalidArgumentError(f"need at least 2 points to fit, got {len(points)}")
    n_values = np.array([p[0] for p in points])
    y = np.array([p[1] for p in points])
    if np.any(np.diff(n_values) == 0):
        raise InvalidArgumentError("N values must be distinct")
    if np.any(n_values < 2):
        raise InvalidArgumentError("N values must be >= 2")
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise InvalidArgumentError("y values must be finite and positive")

    f = model.basis(n_values)
    if not np.all(np.isfinite(f)) or np.any(f <= 0):
        raise InvalidArgumentError(f"model basis {model.label} is not positive on the data")
    norm = float(np.dot(f, f))

    amplitude = float(np.dot(f, y) / norm)
    residuals = y - amplitude * f
    sum_sq = float(np.dot(residuals, residuals))
    dof = len(points) - 1
    std_error = math.sqrt(sum_sq / dof / norm)
    residual_rms = math.sqrt(sum_sq / len(points))

    logger.info("Fitted %s to %d points: A=%.6g +/- %.2g", model.label, len(points), amplitude, std_error)
    return FitResult(model, amplitude, std_error, residual_rms, len(points))


def scaling_model(form: str, exponent: Optional[float] = None) -> ScalingModel:
    try:
        return ScalingModel(form=form, exponent=exponent)
    except ValidationError as e:
        raise InvalidArgumentError(str(e)) from e
