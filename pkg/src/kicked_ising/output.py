"""Atomic, bit-stable output files.

Numbers are written as 17-significant-digit decimals (enough to round-trip
IEEE doubles), locale-independent, so identical runs produce byte-identical
files.  Every file lands via write-to-temp + rename, and every file carries
the config hash: CSVs in leading '#'-comment lines, JSONs as a field.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Iterable, Sequence


def format_number(x) -> str:
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".17g")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(
    path: str,
    header: Sequence[str],
    rows: Iterable[Sequence],
    comments: dict | None = None,
) -> None:
    lines = []
    for key, value in (comments or {}).items():
        lines.append(f"# {key}={value}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_number(v) if not isinstance(v, str) else v for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str, obj: dict) -> None:
    _atomic_write(path, json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n")
