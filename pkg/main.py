# =============================================================================
# FILE: main.py
# PURPOSE:
#   Command-line front end: simulate, optimize, sweep, fit, bounds and verify.
#   Every subcommand writes plot-ready CSV (or JSON / XLSX) rows and prints
#   the written path on stdout. Exit codes: 0 success, 1 domain failure or a
#   failed row / suite, 2 usage error.
# =============================================================================

import argparse
import logging
import sys
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from squeezing.bounds import SATURATION_COLUMNS, saturation_table
from squeezing.errors import InvalidArgumentError, SqueezingError
from squeezing.fitting import fit_amplitude
from squeezing.oracle import (
    MAX_ORACLE_SITES,
    full_coherent_state,
    full_evolve_series,
    full_protocol_hamiltonian,
    full_transverse_covariance,
)
from squeezing.protocols import (
    ProtocolKind,
    characteristic_time,
    protocol_spec,
    qfi_trajectory,
    sweep,
)
from squeezing.qfi import optimal_qfi
from squeezing.reference_values import FIT_MODELS, REFERENCE_AMPLITUDES, SWEEP_N_VALUES, Quantity
from squeezing.verification import SUITE_COLUMNS, run_suites
from tools.result_writer import read_rows, write_results
from utils.config_loader import RunConfig, load_run_config
from utils.retry_config import get_user_friendly_error

logger = logging.getLogger(__name__)
console = Console(stderr=True)

# =============================================================================
# OUTPUT CONTRACTS
# =============================================================================

SIMULATE_COLUMNS = ["t", "syy", "szz", "cross", "theta_opt", "f_q"]
OPTIMIZE_COLUMNS = [
    "protocol", "n", "chi", "b_field", "t_opt", "f_q_opt", "theta_opt",
    "xi_squared", "evaluations", "status", "error",
]
FIT_COLUMNS = [
    "protocol", "quantity", "model", "exponent", "amplitude", "std_error", "residual_rms",
    "n_points", "reference_amplitude", "relative_deviation", "within_tolerance",
]


class UsageError(Exception):
    """Bad or missing flags for the chosen subcommand (exit code 2)."""


def package_version() -> str:
    try:
        return version("squeezing-time-bounds")
    except PackageNotFoundError:
        return "0.1.0"


def _meta(config: RunConfig) -> Dict[str, Any]:
    return {
        "version": package_version(),
        "seed": config.seed,
        "config": config.model_dump(mode="json"),
    }


def _emit(config: RunConfig, columns: Sequence[str], rows: List[Dict[str, Any]]) -> None:
    path = write_results(
        columns, rows, _meta(config),
        fmt=config.format, out=config.out,
        output_dir=config.output_dir, command=config.command,
    )
    print(path)


def _summary(title: str, columns: Sequence[str], rows: List[Dict[str, Any]]) -> None:
    table = Table(title=title)
    for name in columns:
        table.add_column(name)
    for row in rows:
        table.add_row(*[
            f"{row[name]:.6g}" if isinstance(row.get(name), float) else str(row.get(name, ""))
            for name in columns
        ])
    console.print(table)


def _single_n(config: RunConfig) -> int:
    if not config.n or len(config.n) != 1:
        raise UsageError(f"{config.command} needs exactly one --n value")
    return config.n[0]


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def cmd_simulate(config: RunConfig) -> int:
    if config.protocol is None:
        raise UsageError("simulate needs --protocol")
    n = _single_n(config)
    spec = protocol_spec(config.protocol, n, config.chi, config.b_field, config.direction)
    t_g = characteristic_time(spec.kind, n, spec.chi)
    t_min = config.t_min if config.t_min is not None else 0.0
    t_max = config.t_max if config.t_max is not None else 5.0 * t_g
    if t_max <= t_min:
        raise UsageError(f"--t-max ({t_max}) must exceed --t-min ({t_min})")
    grid = np.linspace(t_min, t_max, config.t_points)

    records = qfi_trajectory(spec, grid)
    columns = list(SIMULATE_COLUMNS)
    rows = [
        {"t": r.t, "syy": r.covariance.syy, "szz": r.covariance.szz, "cross": r.covariance.cross,
         "theta_opt": r.theta_opt, "f_q": r.f_q, "mean_x": r.mean_x, "xi_squared": r.xi_squared}
        for r in records
    ]
    if config.with_squeezing:
        columns += ["mean_x", "xi_squared"]

    if config.oracle_check:
        if n > MAX_ORACLE_SITES:
            raise UsageError(f"--oracle-check supports N <= {MAX_ORACLE_SITES}")
        states = full_evolve_series(full_protocol_hamiltonian(spec),
                                    full_coherent_state(n, spec.initial_direction), grid)
        for row, state in zip(rows, states):
            row["discrepancy"] = abs(row["f_q"] - optimal_qfi(full_transverse_covariance(state)).f_q)
        columns.append("discrepancy")
        logger.info("Oracle discrepancy max %.3g", max(row["discrepancy"] for row in rows))

    _emit(config, columns, rows)
    return 0


def _optimize_rows(config: RunConfig, kinds, n_values) -> int:
    if config.b_field is not None and ProtocolKind.TNT not in kinds:
        raise InvalidArgumentError("b_field only applies to the tnt protocol")
    outcomes = sweep(kinds, n_values, chi=config.chi, jobs=config.jobs, objective=config.objective,
                     max_spins=config.max_n, show_progress=len(kinds) * len(n_values) > 1,
                     b_field=config.b_field, initial_direction=config.direction)
    rows = []
    for outcome in outcomes:
        row = {"protocol": outcome.kind.value, "n": outcome.n_spins, "chi": outcome.chi,
               "b_field": outcome.b_field}
        if outcome.result is not None:
            r = outcome.result
            row.update(t_opt=r.t_opt, f_q_opt=r.f_q_opt, theta_opt=r.theta_opt,
                       xi_squared=r.xi_squared, evaluations=r.evaluations, status="ok")
        else:
            row.update(status="failed", error=outcome.error)
            logger.warning("%s N=%d failed: %s", outcome.kind.value, outcome.n_spins, outcome.error)
        rows.append(row)
    _emit(config, OPTIMIZE_COLUMNS, rows)
    _summary(f"{config.command} results", ["protocol", "n", "t_opt", "f_q_opt", "status"], rows)
    return 1 if any(row["status"] != "ok" for row in rows) else 0


def cmd_optimize(config: RunConfig) -> int:
    if config.protocol is None:
        raise UsageError("optimize needs --protocol")
    return _optimize_rows(config, [config.protocol], [_single_n(config)])


def cmd_sweep(config: RunConfig) -> int:
    n_values = config.n or list(SWEEP_N_VALUES)
    return _optimize_rows(config, config.protocols, n_values)


def _as_float(value) -> Optional[float]:
    if value is None or value == "":
        return None
    return float(value)


def cmd_fit(config: RunConfig) -> int:
    if not config.input:
        raise UsageError("fit needs --input")
    records = [row for row in read_rows(config.input) if row.get("status", "ok") == "ok"]

    rows = []
    for kind in ProtocolKind:
        selected = [row for row in records if row["protocol"] == kind.value]
        if not selected:
            continue
        for quantity in (Quantity.T_OPT, Quantity.F_Q_OPT):
            if quantity == Quantity.T_OPT:
                data = [(int(r["n"]), _as_float(r["t_opt"]) * _as_float(r["chi"])) for r in selected]
            else:
                data = [(int(r["n"]), _as_float(r["f_q_opt"])) for r in selected]
            model = FIT_MODELS[(kind, quantity)]
            fit = fit_amplitude(data, model)
            reference = REFERENCE_AMPLITUDES[(kind, quantity)]
            deviation = fit.relative_deviation(reference.amplitude)
            rows.append({
                "protocol": kind.value,
                "quantity": quantity,
                "model": model.form.value,
                "exponent": model.exponent,
                "amplitude": fit.amplitude,
                "std_error": fit.std_error,
                "residual_rms": fit.residual_rms,
                "n_points": fit.n_points,
                "reference_amplitude": reference.amplitude,
                "relative_deviation": deviation,
                "within_tolerance": deviation <= reference.tolerance,
            })
    if not rows:
        raise InvalidArgumentError(f"no successful sweep rows in {config.input}")
    _emit(config, FIT_COLUMNS, rows)
    _summary("Scaling fits", ["protocol", "quantity", "amplitude", "reference_amplitude", "within_tolerance"], rows)
    return 0


def cmd_bounds(config: RunConfig) -> int:
    rows = []
    for d in config.dim:
        for gamma in config.gamma:
            for row in saturation_table(d, gamma, config.alpha):
                rows.append({name: getattr(row, name) for name in SATURATION_COLUMNS})
    _emit(config, SATURATION_COLUMNS, rows)
    return 0


def cmd_verify(config: RunConfig) -> int:
    reports = run_suites(config.suite, trials=config.trials, seed=config.seed)
    rows = [report.as_row() for report in reports]
    _emit(config, SUITE_COLUMNS, rows)
    _summary("Verification suites", SUITE_COLUMNS, rows)
    return 0 if all(report.status == "PASS" for report in reports) else 1


COMMANDS = {
    "simulate": cmd_simulate,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "fit": cmd_fit,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
}


# =============================================================================
# ARGUMENT PARSING
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="RNG seed (default 0)")
    common.add_argument("--jobs", type=int, help="worker processes for sweeps (default 1)")
    common.add_argument("--format", choices=["csv", "json", "xlsx"], help="output format (default csv)")
    common.add_argument("--out", help="output file (default: timestamped file in the output directory)")
    common.add_argument("--output-dir", help="directory for timestamped output files")
    common.add_argument("--config", help="flat key=value file mirroring the long flags")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING (default) or ERROR")

    protocol_flags = argparse.ArgumentParser(add_help=False)
    protocol_flags.add_argument("--n", help="number of spins, or start:stop:step for sweeps")
    protocol_flags.add_argument("--chi", type=float, help="twisting strength (default 1)")
    protocol_flags.add_argument("--objective", choices=["squeezing", "qfi"],
                                help="optimal-time criterion (default squeezing)")
    protocol_flags.add_argument("--max-n", type=int, help="largest N the optimizer accepts")
    protocol_flags.add_argument("--b-field", type=float,
                                help="twist-and-turn field, applied to tnt only (default chi*N/2)")
    protocol_flags.add_argument("--direction", choices=["+x", "-x"],
                                help="initial polarization; pass as --direction=-x")

    parser = argparse.ArgumentParser(
        prog="squeezing",
        description="Spin-squeezing QFI simulations and time-complexity bound tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common, protocol_flags], help="QFI trajectory of one protocol")
    p.add_argument("--protocol", choices=[k.value for k in ProtocolKind])
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--t-points", type=int)
    p.add_argument("--with-squeezing", action="store_true", default=None, help="add mean_x and xi_squared")
    p.add_argument("--oracle-check", action="store_true", default=None,
                   help=f"compare with full 2^N evolution (N <= {MAX_ORACLE_SITES})")

    p = sub.add_parser("optimize", parents=[common, protocol_flags], help="optimal time for one (protocol, N)")
    p.add_argument("--protocol", choices=[k.value for k in ProtocolKind])

    p = sub.add_parser("sweep", parents=[common, protocol_flags], help="optimal times over an N grid")
    p.add_argument("--protocols", help="comma list (default tat,tnt,oat)")

    p = sub.add_parser("fit", parents=[common], help="fit scaling amplitudes to a sweep file")
    p.add_argument("--input", help="CSV or JSON file written by sweep")

    p = sub.add_parser("bounds", parents=[common], help="bound vs protocol exponent table")
    p.add_argument("--alpha", help="start:stop:step or comma list (default 0:4:0.1)")
    p.add_argument("--dim", help="lattice dimension(s) (default 1)")
    p.add_argument("--gamma", help="QFI exponent(s) (default 1,0.5)")

    p = sub.add_parser("verify", parents=[common], help="run the property suites")
    p.add_argument("--suite", help="fvc, zeta, convexity, sector, envelope, lightcone or all")
    p.add_argument("--trials", type=int, help="random trials per suite (default 100)")

    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True)],
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    values = {key: value for key, value in vars(args).items() if key not in ("command", "config")}

    try:
        config = load_run_config(args.command, values, args.config)
    except (ValidationError, FileNotFoundError) as e:
        parser.error(str(e))

    configure_logging(config.log_level)
    try:
        return COMMANDS[config.command](config)
    except UsageError as e:
        parser.error(str(e))
    except (SqueezingError, OSError) as e:
        logger.error(get_user_friendly_error(e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
