"""Deterministic CSV / JSON table output."""

import csv
import io
import json
import math
from typing import Any, Iterable, List, Sequence


def format_value(value: Any) -> str:
    """Format a cell: floats with 17 significant digits, inf as 'inf'."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    try:
        number = float(value)
    except (TypeError, ValueError):
        return str(value)
    if math.isnan(number):
        raise ValueError("NaN is not a valid table value")
    if math.isinf(number):
        return "inf" if number > 0 else "-inf"
    return format(number, ".17g")


def _json_value(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    number = float(value)
    if math.isinf(number):
        return "inf" if number > 0 else "-inf"
    return float(format(number, ".17g"))


class Table:
    """Named columns plus rows, rendered as CSV or JSON.

    Parameters:
    ----------
        columns: Column names, in output order
        footer: Optional comment lines appended to CSV output
    """

    def __init__(self, columns: Sequence[str], footer: Iterable[str] = ()):
        self.columns: List[str] = list(columns)
        self.rows: List[List[Any]] = []
        self.footer: List[str] = list(footer)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"expected {len(self.columns)} values, got {len(values)}"
            )
        self.rows.append(list(values))

    def extend(self, rows: Iterable[Sequence[Any]]) -> None:
        for row in rows:
            self.add(*row)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(v) for v in row])
        for line in self.footer:
            buffer.write(f"# {line}\n")
        return buffer.getvalue()

    def to_json(self) -> str:
        payload = {
            "columns": self.columns,
            "rows": [[_json_value(v) for v in row] for row in self.rows],
        }
        if self.footer:
            payload["notes"] = self.footer
        return json.dumps(payload, indent=2) + "\n"

    def render(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown output format: {fmt!r}")

    def __len__(self) -> int:
        return len(self.rows)
