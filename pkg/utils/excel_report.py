# =============================================================================
# FILE: utils/excel_report.py
# PURPOSE:
#   Writes CLI result rows to a styled Excel (.xlsx) workbook: a "Results"
#   sheet with one header row and one row per record, and a "Run Metadata"
#   sheet echoing the version, seed and validated configuration.
# =============================================================================

import logging
import os
from typing import Any, Dict, List, Sequence

import openpyxl
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

logger = logging.getLogger(__name__)

NUMBER_FORMAT = "0.00000000000E+00"


def generate_excel_report(
    columns: Sequence[str],
    rows: List[Dict[str, Any]],
    meta: Dict[str, Any],
    output_filepath: str,
) -> str:
    """
    Creates a two-sheet workbook for one CLI command's output.

    Tabs:
      1. Results (columns in contract order, floats in scientific format)
      2. Run Metadata (key / value pairs, nested config flattened)
    """
    wb = openpyxl.Workbook()

    header_fill = PatternFill(start_color="1E3A8A", end_color="1E3A8A", fill_type="solid")
    zebra_fill = PatternFill(start_color="F3F4F6", end_color="F3F4F6", fill_type="solid")
    white_bold_font = Font(name="Calibri", size=11, bold=True, color="FFFFFF")
    bold_font = Font(name="Calibri", size=11, bold=True)
    regular_font = Font(name="Calibri", size=11)
    thin_border = Border(
        left=Side(style="thin", color="D1D5DB"),
        right=Side(style="thin", color="D1D5DB"),
        top=Side(style="thin", color="D1D5DB"),
        bottom=Side(style="thin", color="D1D5DB"),
    )

    # -------------------------------------------------------------------------
    # TAB 1: RESULTS
    # -------------------------------------------------------------------------
    ws_results = wb.active
    ws_results.title = "Results"
    for c_idx, name in enumerate(columns, 1):
        cell = ws_results.cell(row=1, column=c_idx, value=name)
        cell.font = white_bold_font
        cell.fill = header_fill
        cell.alignment = Alignment(horizontal="center")
    ws_results.freeze_panes = "A2"

    for r_idx, row in enumerate(rows, 2):
        for c_idx, name in enumerate(columns, 1):
            value = row.get(name)
            cell = ws_results.cell(row=r_idx, column=c_idx, value=value)
            cell.font = regular_font
            cell.border = thin_border
            if isinstance(value, float):
                cell.number_format = NUMBER_FORMAT
            if r_idx % 2 == 0:
                cell.fill = zebra_fill

    # -------------------------------------------------------------------------
    # TAB 2: RUN METADATA
    # -------------------------------------------------------------------------
    ws_meta = wb.create_sheet(title="Run Metadata")
    r = 1
    for key, value in _flatten(meta):
        ws_meta.cell(row=r, column=1, value=key).font = bold_font
        ws_meta.cell(row=r, column=2, value=value).font = regular_font
        r += 1

    for ws in wb.worksheets:
        for col in ws.columns:
            max_len = max(len(str(cell.value if cell.value is not None else "")) for cell in col)
            ws.column_dimensions[get_column_letter(col[0].column)].width = min(max(max_len + 3, 12), 60)

    directory = os.path.dirname(output_filepath)
    if directory:
        os.makedirs(directory, exist_ok=True)
    wb.save(output_filepath)
    logger.info("Excel report written to %s", output_filepath)
    return output_filepath


def _flatten(data: Dict[str, Any], prefix: str = ""):
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, f"{name}.")
        elif isinstance(value, (list, tuple)):
            yield name, ", ".join(str(v) for v in value)
        else:
            yield name, value
