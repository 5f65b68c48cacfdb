"""CSV and JSON readers/writers shared by the command-line tools."""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

__all__ = ["format_value", "write_csv", "read_csv", "write_json", "read_json", "to_jsonable"]


def format_value(value):
    """Shortest text that parses back to the same value."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _open_out(path):
    if path is None or str(path) == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline=""), True


def write_csv(path, header, rows):
    """Write a headed CSV to ``path`` (stdout when None or '-')."""
    fh, close = _open_out(path)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    finally:
        if close:
            fh.close()


def _convert(cell):
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv(path_or_text):
    """
    Columns of a headed CSV as a dict of lists (numbers parsed).

    Lines starting with '#' are skipped.
    """
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and "\n" not in path_or_text):
        text = Path(path_or_text).read_text()
    else:
        text = path_or_text
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.reader(io.StringIO("\n".join(lines)))
    header = next(reader)
    cols = {name.strip(): [] for name in header}
    for row in reader:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        for name, cell in zip(header, row):
            cols[name.strip()].append(_convert(cell.strip()))
    return cols


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # strict JSON has no NaN or Infinity
        return float(obj) if np.isfinite(obj) else None
    return obj


def write_json(path, payload):
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=False, allow_nan=False) + "\n"
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def read_json(path_or_text):
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and not path_or_text.lstrip().startswith("{")):
        return json.loads(Path(path_or_text).read_text())
    return json.loads(path_or_text)
