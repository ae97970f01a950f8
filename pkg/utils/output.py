#!/usr/bin/env python3
"""
Result files: CSV with a '#'-prefixed header block, or a single JSON document.

Numbers are written with 12 significant digits. Files are written to a
temporary sibling first and renamed into place.
"""
import csv
import io
import json
import logging
import os
import sys
import tempfile
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

DIGITS = 12


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{DIGITS}g")
    return str(value)


def _json_value(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not np.isfinite(value):
            return None
        return float(format(value, f".{DIGITS}g"))
    return value


def render_csv(header: Sequence[Tuple[str, str]], columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    for key, text in header:
        buffer.write(f"# {key} = {text}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def render_json(header: Sequence[Tuple[str, str]], columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    document = {
        "header": dict(header),
        "columns": list(columns),
        "rows": [[_json_value(v) for v in row] for row in rows],
    }
    return json.dumps(document, indent=1) + "\n"


def write_atomic(path: str, text: str):
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    handle, temp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise


def write_table(path: Optional[str], header: Sequence[Tuple[str, str]], columns: Sequence[str],
                rows: Iterable[Sequence], fmt: str = "csv"):
    """
    Emit one result table.

    Args:
        path: Destination file, or None / "-" for standard output.
        header: (key, value) pairs echoed before the data.
        columns: Column names.
        rows: Data rows, one value per column.
        fmt: "csv" or "json".
    """
    rows: List[Sequence] = list(rows)
    if fmt == "csv":
        text = render_csv(header, columns, rows)
    elif fmt == "json":
        text = render_json(header, columns, rows)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if path in (None, "", "-"):
        sys.stdout.write(text)
    else:
        write_atomic(path, text)
        logger.info("wrote %d rows to %s", len(rows), path)


def read_csv(text: str) -> Tuple[dict, List[str], List[List[str]]]:
    """Split a CSV written by ``write_table`` back into (header, columns, rows)."""
    header = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            header[key.strip()] = value.strip()
        elif line:
            body.append(line)
    reader = list(csv.reader(body))
    if not reader:
        return header, [], []
    return header, reader[0], reader[1:]
