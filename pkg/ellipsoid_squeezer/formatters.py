"""
Formatters for run reports.
"""
import csv
import json
from abc import ABC, abstractmethod
from typing import Any, Dict, List, TextIO

import numpy as np

CSV_TRACE_COLUMNS = ("bound", "method", "lambda", "delta", "d", "r", "R")


def to_jsonable(value: Any) -> Any:
    """json.dump default hook for numpy scalars, arrays and complex numbers."""
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class BaseFormatter(ABC):
    """Base class for formatters."""

    extension = None

    @abstractmethod
    def format(self, report: Dict[str, Any], output_file: TextIO) -> None:
        """
        Format a report and write it to the output file.

        Args:
            report: Report document from core.build_report
            output_file: Output file object
        """
        pass


class JSONFormatter(BaseFormatter):
    """Deterministic JSON: sorted keys, fixed indentation, no timestamps."""

    extension = "json"

    def format(self, report: Dict[str, Any], output_file: TextIO) -> None:
        json.dump(report, output_file, indent=2, sort_keys=True, ensure_ascii=False, default=to_jsonable)
        output_file.write("\n")


class CSVFormatter(BaseFormatter):
    """
    One row per bound report: re_j, im_j per coordinate, then bound, method,
    lambda, delta, d, r, R and error. Reports without bound rows are written
    as flattened key, value pairs.
    """

    extension = "csv"

    @staticmethod
    def _row(report: Dict[str, Any]) -> Dict[str, Any]:
        point = report.get("point", [])
        row = {}
        for j in range(0, len(point), 2):
            row[f"re_{j // 2 + 1}"] = point[j]
            row[f"im_{j // 2 + 1}"] = point[j + 1]
        trace = report.get("trace", {})
        row["bound"] = report.get("bound", "")
        row["method"] = report.get("method", "")
        for key in ("lambda", "delta", "d", "r", "R"):
            row[key] = trace.get(key, "")
        row["error"] = report["error"]["message"] if "error" in report else ""
        return row

    @staticmethod
    def _flatten(value: Any, prefix: str = "") -> List[List[Any]]:
        if isinstance(value, dict):
            pairs = []
            for key in sorted(value):
                pairs.extend(CSVFormatter._flatten(value[key], f"{prefix}.{key}" if prefix else str(key)))
            return pairs
        if isinstance(value, (list, tuple)) and any(isinstance(v, (dict, list)) for v in value):
            pairs = []
            for i, item in enumerate(value):
                pairs.extend(CSVFormatter._flatten(item, f"{prefix}[{i}]"))
            return pairs
        if isinstance(value, (list, tuple)):
            value = " ".join(repr(to_jsonable(v) if isinstance(v, np.generic) else v) for v in value)
        return [[prefix, value]]

    @staticmethod
    def bound_rows(report: Dict[str, Any]) -> List[Dict[str, Any]]:
        result = report.get("result", {})
        if "reports" in result:
            return result["reports"]
        if "bound" in result:
            return [result]
        return []

    def format(self, report: Dict[str, Any], output_file: TextIO) -> None:
        rows = self.bound_rows(report)
        writer = csv.writer(output_file, lineterminator="\n")
        if not rows:
            writer.writerow(["key", "value"])
            writer.writerows(self._flatten(report))
            return

        formatted = [self._row(r) for r in rows]
        width = max(len(r.get("point", [])) for r in rows) // 2
        header = [f"{part}_{j}" for j in range(1, width + 1) for part in ("re", "im")]
        header += list(CSV_TRACE_COLUMNS) + ["error"]
        writer.writerow(header)
        for row in formatted:
            writer.writerow([row.get(col, "") for col in header])


FORMATTERS = {
    "json": JSONFormatter,
    "csv": CSVFormatter,
}
