"""CSV/JSON writers with reproducible, versioned formatting.

Every CSV starts with the schema comment "# ptspec-csv v1"; floats are
printed with 10 significant digits, so identical inputs and seeds give
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

CSV_HEADER = "# ptspec-csv v1"


def fmt(x) -> str:
    """10-significant-digit text for numbers; str() for the rest."""
    if isinstance(x, float):
        return f"{x:.10g}"
    if isinstance(x, complex):
        return f"{x.real:.10g}{x.imag:+.10g}j"
    return str(x)


def write_csv(path, columns: list[str], rows: list[tuple], comments: list[str] | None = None) -> None:
    lines = [CSV_HEADER]
    for c in comments or []:
        lines.append(f"# {c}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Columns and float-parsed rows of a ptspec CSV (comments skipped)."""
    lines = Path(path).read_text().splitlines()
    body = [ln for ln in lines if ln.strip() and not ln.startswith("#")]
    if not body:
        raise ValueError(f"{path}: no data rows")
    columns = body[0].split(",")
    rows = []
    for ln in body[1:]:
        cells = []
        for cell in ln.split(","):
            try:
                cells.append(float(cell))
            except ValueError:
                cells.append(cell)
        rows.append(cells)
    return columns, rows


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.10g}")
    if isinstance(obj, complex):
        return {"re": _round_floats(obj.real), "im": _round_floats(obj.imag)}
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def write_json(path, data) -> None:
    Path(path).write_text(
        json.dumps(_round_floats(data), indent=2, sort_keys=True) + "\n"
    )


def json_text(data) -> str:
    return json.dumps(_round_floats(data), indent=2, sort_keys=True)
