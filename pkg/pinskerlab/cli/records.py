# cli/records.py

"""
Record writers shared by every subcommand.

CSV: header row, ``,`` separator, ``\\n`` line ends, floats with 17 significant
digits (``format(x, ".17g")``), empty field for a missing value. Reading a file
back with ``read_csv`` and writing it again reproduces it byte for byte.
JSON lines: one object per record, non-finite floats written as strings.
"""

import csv
import json
import math
from typing import IO, Any, Dict, Iterable, List, Sequence

import numpy as np

from ..errors import ParameterError

FORMATS = ("csv", "json", "table")

Record = Dict[str, Any]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, np.ndarray):
        return " ".join(format_value(x) for x in value.tolist())
    return str(value)


def parse_value(text: str) -> Any:
    """Inverse of ``format_value`` for scalars."""
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _columns(records: Sequence[Record]) -> List[str]:
    columns: List[str] = []
    for record in records:
        for key in record:
            if key not in columns:
                columns.append(key)
    return columns


def write_csv(records: Sequence[Record], stream: IO[str]) -> None:
    columns = _columns(records)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        writer.writerow([format_value(record.get(col)) for col in columns])


def read_csv(stream: IO[str]) -> List[Record]:
    reader = csv.DictReader(stream)
    return [{key: parse_value(value) for key, value in row.items()} for row in reader]


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else format_value(value)
    if isinstance(value, np.ndarray):
        return [_json_value(x) for x in value.tolist()]
    return value


def write_json_lines(records: Iterable[Record], stream: IO[str]) -> None:
    for record in records:
        stream.write(json.dumps({k: _json_value(v) for k, v in record.items()}, ensure_ascii=False))
        stream.write("\n")


def write_table(records: Sequence[Record], stream: IO[str]) -> None:
    """Aligned columns for reading at the terminal."""
    columns = _columns(records)
    cells = [[format_value(r.get(col)) for col in columns] for r in records]
    widths = [max([len(col)] + [len(row[i]) for row in cells]) for i, col in enumerate(columns)]
    stream.write("  ".join(col.ljust(w) for col, w in zip(columns, widths)).rstrip() + "\n")
    stream.write("  ".join("-" * w for w in widths) + "\n")
    for row in cells:
        stream.write("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n")


def write_records(records: Sequence[Record], fmt: str, stream: IO[str]) -> None:
    if fmt == "csv":
        write_csv(records, stream)
    elif fmt == "json":
        write_json_lines(records, stream)
    elif fmt == "table":
        write_table(records, stream)
    else:
        raise ParameterError(f"unknown output format '{fmt}' (expected one of {', '.join(FORMATS)})")
