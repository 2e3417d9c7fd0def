"""Small helpers for the data files the toolkit emits.

All floating-point values are printed with 17 significant digits so that
every CSV field round-trips to the exact binary double.
"""

from __future__ import annotations

import json
from pathlib import Path


def fmt17(x: float) -> str:
    """Render a float with 17 significant digits."""
    return "%.17g" % float(x)


def write_csv(path, header: list[str], rows) -> None:
    """Write comma-separated rows with a header and no trailing delimiter.

    Floats are formatted via :func:`fmt17`; everything else via ``str``.
    """
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt17(v) if isinstance(v, float) else str(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path, obj) -> None:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
