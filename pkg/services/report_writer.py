"""
Serialization of result records as aligned text, CSV or JSON lines, and of
spiral rasters as binary PGM.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from config.error_handling import ValidationError
from models.core import OutputFormat
from services.interfaces import ReportWriterInterface

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 6


def format_value(value: Any) -> str:
    """Text form of one cell: floats to 6 significant digits, integers exact."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    if isinstance(value, (list, tuple)):
        return "[" + " ".join(format_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return json.dumps(_json_ready(value), sort_keys=True)
    return str(value)


def _json_ready(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return _json_ready(float(value))
    if isinstance(value, dict):
        return {str(k): _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    return value


def _columns(records: Sequence[Dict[str, Any]], columns: Optional[List[str]]) -> List[str]:
    if columns:
        return list(columns)
    ordered: List[str] = []
    for record in records:
        for key in record:
            if key not in ordered:
                ordered.append(key)
    return ordered


class TableWriter(ReportWriterInterface):
    """Whitespace-aligned columns with a header line."""

    def render(self, records: Sequence[Dict[str, Any]], columns: List[str] = None) -> str:
        names = _columns(records, columns)
        if not names:
            return ""
        cells = [[format_value(r.get(c)) for c in names] for r in records]
        widths = [max([len(n)] + [len(row[i]) for row in cells]) for i, n in enumerate(names)]
        lines = ["  ".join(n.rjust(w) for n, w in zip(names, widths))]
        lines.extend("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells)
        return "\n".join(lines) + "\n"


class CsvWriter(ReportWriterInterface):
    """RFC 4180 CSV with a header row and \\n line endings."""

    def render(self, records: Sequence[Dict[str, Any]], columns: List[str] = None) -> str:
        names = _columns(records, columns)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(names)
        for record in records:
            writer.writerow([format_value(record.get(c)) for c in names])
        return buffer.getvalue()


class JsonLinesWriter(ReportWriterInterface):
    """One JSON object per record with sorted keys."""

    def render(self, records: Sequence[Dict[str, Any]], columns: List[str] = None) -> str:
        lines = []
        for record in records:
            selected = {c: record.get(c) for c in columns} if columns else record
            lines.append(json.dumps(_json_ready(selected), sort_keys=True))
        return "".join(line + "\n" for line in lines)


WRITERS = {
    OutputFormat.TABLE: TableWriter,
    OutputFormat.CSV: CsvWriter,
    OutputFormat.JSON: JsonLinesWriter,
}


def get_writer(output_format: Union[OutputFormat, str]) -> ReportWriterInterface:
    if isinstance(output_format, str):
        try:
            output_format = OutputFormat(output_format)
        except ValueError:
            raise ValidationError(
                f"unknown output format '{output_format}'; choose from table, csv, json"
            )
    return WRITERS[output_format]()


def pgm_bytes(raster: np.ndarray) -> bytes:
    """Binary PGM (P5, maxval 255) encoding of a uint8 raster."""
    if raster.ndim != 2 or raster.dtype != np.uint8:
        raise ValidationError("PGM rasters must be two-dimensional uint8 arrays")
    height, width = raster.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(raster).tobytes()


def write_pgm(path: Union[str, Path], raster: np.ndarray) -> Path:
    path = Path(path)
    path.write_bytes(pgm_bytes(raster))
    logger.info(f"Wrote {raster.shape[1]}x{raster.shape[0]} raster to {path}")
    return path


def write_report(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    logger.debug(f"Wrote report to {path}")
    return path
