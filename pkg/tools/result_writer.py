# =============================================================================
# FILE: tools/result_writer.py
# PURPOSE:
#   Persists CLI result rows as CSV, JSON or XLSX. Files go to the requested
#   path, or to a timestamped name under the output directory when none is
#   given. File contents never embed the time, so reruns are byte-identical.
# =============================================================================

import csv
import json
import logging
import math
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from utils.excel_report import generate_excel_report
from utils.retry_config import FILE_RETRY_CONFIG, with_retry

logger = logging.getLogger(__name__)

CSV_SIGNIFICANT_DIGITS = 12
FORMATS = ("csv", "json", "xlsx")


def format_value(value: Any) -> str:
    """Render one CSV cell: floats at 12 significant digits, booleans lowercase, None empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"
    return str(value)


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def default_output_path(output_dir: str, command: str, fmt: str) -> Path:
    timestamp = datetime.now().strftime("%y%m%d_%H%M%S")
    return Path(output_dir) / f"{timestamp}_{command}.{fmt}"


# -----------------------------------------------------------------------------
# WRITERS
# -----------------------------------------------------------------------------
@with_retry(FILE_RETRY_CONFIG)
def write_csv(path: Path, columns: Sequence[str], rows: List[Dict[str, Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(name)) for name in columns])
    return path


@with_retry(FILE_RETRY_CONFIG)
def write_json(path: Path, columns: Sequence[str], rows: List[Dict[str, Any]], meta: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        "meta": _json_safe(meta),
        "rows": [_json_safe({name: row.get(name) for name in columns}) for row in rows],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(document, f, indent=2)
        f.write("\n")
    return path


@with_retry(FILE_RETRY_CONFIG)
def write_xlsx(path: Path, columns: Sequence[str], rows: List[Dict[str, Any]], meta: Dict[str, Any]) -> Path:
    return Path(generate_excel_report(columns, rows, meta, str(path)))


def write_results(
    columns: Sequence[str],
    rows: List[Dict[str, Any]],
    meta: Dict[str, Any],
    fmt: str = "csv",
    out: Optional[str] = None,
    output_dir: str = "output",
    command: str = "results",
) -> Path:
    """
    Write result rows in the requested format.

    Args:
        columns: column names in contract order.
        rows: one dict per record; missing keys become empty cells.
        meta: version, seed and config echo (JSON and XLSX only).
        fmt: csv, json or xlsx.
        out: explicit path; a timestamped file under output_dir otherwise.

    Returns:
        The path written.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format {fmt!r}")
    path = Path(out) if out else default_output_path(output_dir, command, fmt)
    if fmt == "csv":
        written = write_csv(path, columns, rows)
    elif fmt == "json":
        written = write_json(path, columns, rows, meta)
    else:
        written = write_xlsx(path, columns, rows, meta)
    logger.info("Wrote %d rows to %s", len(rows), written)
    return written


def read_rows(path: str) -> List[Dict[str, Any]]:
    """Load rows back from a CSV or JSON results file (CSV cells stay strings)."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        with open(path, encoding="utf-8") as f:
            return json.load(f)["rows"]
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
