"""Deterministic text output: real formatting that round-trips binary64,
JSON and CSV emitters, and atomic file writes.

Reals are printed with 17 significant digits so parsing the output recovers
the exact double.  Identical inputs produce byte-identical output.
"""

import json
import math
import os
import sys
import tempfile

SCHEMA_VERSION = 1

JSON_INFINITY = "Infinity"   # accepted by json.loads
CSV_INFINITY = "inf"


def format_real(value: float, infinity_token: str = CSV_INFINITY) -> str:
    """17-significant-digit decimal form of a finite or infinite double."""
    value = float(value)
    if math.isnan(value):
        raise ValueError("NaN has no serialized form")
    if math.isinf(value):
        return infinity_token if value > 0 else "-" + infinity_token
    text = "%.17g" % value
    if not any(ch in text for ch in ".eE"):
        text += ".0"
    return text


def _emit(obj, out, indent: int, infinity_token: str) -> None:
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(inner + json.dumps(str(key)) + ": ")
            _emit(value, out, indent + 2, infinity_token)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(inner)
            _emit(value, out, indent + 2, infinity_token)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_real(obj, infinity_token))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_json(document) -> str:
    """Pretty JSON with deterministic key order (insertion order) and exact
    reals.  Infinities use the ``Infinity`` token python's parser accepts."""
    out: list = []
    _emit(document, out, 0, JSON_INFINITY)
    out.append("\n")
    return "".join(out)


def emit_csv(header, rows) -> str:
    """CSV with '\\n' line endings; reals exact, infinities as ``inf``."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, bool):
                cells.append("true" if cell else "false")
            elif isinstance(cell, int):
                cells.append(str(cell))
            elif isinstance(cell, float):
                cells.append(format_real(cell, CSV_INFINITY))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def parse_real(text: str) -> float:
    """Inverse of format_real for both infinity tokens."""
    stripped = text.strip()
    lowered = stripped.lower()
    if lowered in ("inf", "infinity"):
        return math.inf
    if lowered in ("-inf", "-infinity"):
        return -math.inf
    return float(stripped)


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the same directory plus rename, so a
    crash never leaves a half-written file at ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def write_output(text: str, path: str | None) -> None:
    """Write to the path atomically, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
    else:
        atomic_write(path, text)
