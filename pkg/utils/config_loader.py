# =============================================================================
# FILE: utils/config_loader.py
# PURPOSE:
#   Builds the validated RunConfig for one CLI invocation by layering, from
#   lowest to highest precedence: built-in defaults, SQUEEZING_* environment
#   variables (a .env file is honoured), a flat key=value config file, and
#   explicit command-line flags.
# =============================================================================

import logging
import os
from typing import Any, Dict, List, Literal, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

from squeezing.bounds import alpha_grid
from squeezing.collective import Direction
from squeezing.protocols import DEFAULT_MAX_SPINS, ProtocolKind, SearchObjective

logger = logging.getLogger(__name__)

ENV_KEYS = {
    "SQUEEZING_MAX_N": "max_n",
    "SQUEEZING_JOBS": "jobs",
    "SQUEEZING_OUTPUT_DIR": "output_dir",
    "SQUEEZING_LOG_LEVEL": "log_level",
}

Command = Literal["simulate", "optimize", "sweep", "fit", "bounds", "verify"]


def parse_int_range(text: str) -> List[int]:
    """Inclusive "start:stop:step", a comma list, or a single integer."""
    text = str(text).strip()
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        if step <= 0:
            raise ValueError(f"range step must be positive in {text!r}")
        return list(range(start, stop + 1, step))
    return [int(p) for p in text.split(",") if p.strip()]


def parse_float_range(text: str) -> List[float]:
    """Inclusive "start:stop:step" (rounded to 12 digits), a comma list, or a single value."""
    text = str(text).strip()
    if ":" in text:
        start, stop, step = (float(p) for p in text.split(":"))
        return alpha_grid(start, stop, step)
    return [float(p) for p in text.split(",") if p.strip()]


def _split(value):
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


class RunConfig(BaseModel):
    """Every option of every subcommand; unused ones keep their defaults."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    # simulate / optimize / sweep
    protocol: Optional[ProtocolKind] = None
    protocols: List[ProtocolKind] = Field(default_factory=lambda: list(ProtocolKind))
    n: Optional[List[int]] = None
    chi: float = Field(1.0, gt=0, allow_inf_nan=False)
    b_field: Optional[float] = Field(None, allow_inf_nan=False)
    direction: Direction = Direction.MINUS_X
    t_min: Optional[float] = Field(None, ge=0, allow_inf_nan=False)
    t_max: Optional[float] = Field(None, gt=0, allow_inf_nan=False)
    t_points: int = Field(201, ge=2)
    with_squeezing: bool = False
    oracle_check: bool = False
    objective: SearchObjective = SearchObjective.SQUEEZING
    max_n: int = Field(DEFAULT_MAX_SPINS, ge=2)
    # fit
    input: Optional[str] = None
    # bounds
    alpha: List[float] = Field(default_factory=lambda: alpha_grid(0.0, 4.0, 0.1))
    dim: List[int] = Field(default_factory=lambda: [1])
    gamma: List[float] = Field(default_factory=lambda: [1.0, 0.5])
    # verify
    suite: List[str] = Field(default_factory=lambda: ["all"])
    trials: int = Field(100, ge=1)
    # global
    seed: int = 0
    jobs: int = Field(1, ge=1)
    format: Literal["csv", "json", "xlsx"] = "csv"
    out: Optional[str] = None
    output_dir: str = "output"
    log_level: str = "WARNING"
    config: Optional[str] = None

    @field_validator("n", mode="before")
    @classmethod
    def _parse_n(cls, value):
        if value is None or isinstance(value, list):
            return value
        return parse_int_range(value)

    @field_validator("alpha", "gamma", mode="before")
    @classmethod
    def _parse_floats(cls, value):
        return parse_float_range(value) if isinstance(value, (str, int, float)) else value

    @field_validator("dim", mode="before")
    @classmethod
    def _parse_dims(cls, value):
        return parse_int_range(value) if isinstance(value, (str, int)) else value

    @field_validator("protocols", "suite", mode="before")
    @classmethod
    def _parse_lists(cls, value):
        return _split(value)

    @field_validator("suite")
    @classmethod
    def _known_suites(cls, value):
        known = {"fvc", "zeta", "convexity", "sector", "envelope", "lightcone", "all"}
        unknown = [name for name in value if name not in known]
        if unknown:
            raise ValueError(f"unknown suite(s) {unknown}; choose from {sorted(known)}")
        return value

    @field_validator("log_level")
    @classmethod
    def _level(cls, value):
        value = str(value).upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return value


def environment_defaults() -> Dict[str, Any]:
    """SQUEEZING_* variables, after loading .env from the working directory."""
    load_dotenv()
    return {field: os.environ[key] for key, field in ENV_KEYS.items() if os.environ.get(key)}


def read_config_file(path: str) -> Dict[str, Any]:
    """Flat key=value file; keys are long flag names with '-' written as '_'."""
    values = dotenv_values(path)
    return {key.strip().lower().replace("-", "_"): value for key, value in values.items() if value is not None}


def load_run_config(command: str, cli_values: Dict[str, Any], config_path: Optional[str] = None) -> RunConfig:
    """
    Merge the configuration layers and validate them.

    Raises:
        pydantic.ValidationError: for unknown keys or invalid values.
        FileNotFoundError: if config_path does not exist.
    """
    merged: Dict[str, Any] = environment_defaults()
    if config_path:
        if not os.path.exists(config_path):
            raise FileNotFoundError(f"config file not found: {config_path}")
        merged.update(read_config_file(config_path))
        merged["config"] = config_path
    merged.update({key: value for key, value in cli_values.items() if value is not None})
    merged["command"] = command
    logger.debug("Merged configuration keys: %s", sorted(merged))
    return RunConfig.model_validate(merged)
