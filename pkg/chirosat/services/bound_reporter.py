"""
bound_reporter.py – bound tables and pipeline reports
=====================================================

Turns a ``BoundTable`` / ``PipelineReport`` into a ``pandas.DataFrame``, a
plain-text summary for the terminal and, on request, an Excel workbook.

Çıktı
-----
<output_dir>/bound_<mode>_d<d>_k<k>.xlsx
<output_dir>/hexagon_pipeline.xlsx
"""
from __future__ import annotations

from pathlib import Path
from typing import List, Union

import pandas as pd

from chirosat.core.exceptions import FileSystemException
from chirosat.core.logger import get_logger
from chirosat.models.schemas import BoundTable, PipelineReport

logger = get_logger(__name__)

COLUMNS = ["n", "status", "verified", "solve_time", "check_time", "cnf_bytes", "proof_bytes",
           "cnf_path", "proof_path", "witness_path", "reason"]


def to_frame(report: Union[BoundTable, PipelineReport]) -> pd.DataFrame:
    """One row per instance, sorted by n."""
    df = pd.DataFrame([r.to_dict() for r in report.rows], columns=COLUMNS)
    if df.empty:
        return df
    return df.sort_values("n").reset_index(drop=True)


def _title(report: Union[BoundTable, PipelineReport]) -> str:
    if isinstance(report, BoundTable):
        letter = "g" if report.mode == "gon" else "h"
        return f"{letter}^({report.d})({report.k})"
    return "hexagon pipeline (9-gon frame, no 6-hole)"


def summary_lines(report: Union[BoundTable, PipelineReport]) -> List[str]:
    lines = [_title(report)]
    if isinstance(report, BoundTable):
        if report.bound is not None:
            lines.append(f"bound: {_title(report)} <= {report.bound}"
                         + (" (tight)" if report.row(report.bound - 1) is not None else ""))
        else:
            lines.append("bound: not derived")
        known = report.known
        if known is not None:
            value = "infinite" if known.value is None else known.value
            lines.append(f"known: {value} ({'exact' if known.exact else 'upper bound'})")
            if known.exact and report.bound is not None and known.value != report.bound:
                lines.append(f"WARNING: derived bound {report.bound} disagrees with known value {value}")
        bad = report.monotonicity_violations()
        if bad:
            lines.append(f"WARNING: sat rows above a verified unsat row: {bad}")
    else:
        lines.append(f"passed: {report.passed}")
        lines.append(f"total DIMACS size: {report.total_cnf_bytes / 1e6:.1f} MB")
    return lines


def render_summary(report: Union[BoundTable, PipelineReport]) -> str:
    df = to_frame(report)
    body = df[["n", "status", "verified", "solve_time", "check_time"]].to_string(index=False) \
        if not df.empty else "(no rows)"
    return "\n".join(summary_lines(report) + ["", body]) + "\n"


def export_excel(report: Union[BoundTable, PipelineReport], path) -> Path:
    """Rows sheet plus a summary sheet, written with openpyxl."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with pd.ExcelWriter(path, engine="openpyxl") as writer:
            to_frame(report).to_excel(writer, sheet_name="Rows", index=False)
            pd.DataFrame({"summary": summary_lines(report)}).to_excel(
                writer, sheet_name="Summary", index=False)
    except OSError as exc:
        raise FileSystemException(f"cannot write {path}: {exc}", file_path=str(path),
                                  original_exception=exc) from exc
    logger.info("Rapor oluşturuldu → %s", path)
    return path
