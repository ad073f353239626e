"""CSV/JSON emission with exact numeric round-trips.

Floats are serialized with 17 significant digits, which reconstructs the
same double bit-for-bit; the reader here is the round-trip counterpart used
by the tests and by downstream tooling.
"""

from __future__ import annotations

import json
from pathlib import Path

__all__ = ["format_value", "rows_to_text", "write_rows", "read_csv_rows"]


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _csv_quote(s: str) -> str:
    if any(c in s for c in ",\"\n"):
        return '"' + s.replace('"', '""') + '"'
    return s


def rows_to_text(header: list[str], rows: list[dict], fmt: str = "csv") -> str:
    """Render rows (dicts keyed by header names) as CSV or a JSON array."""
    if fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_csv_quote(format_value(row[h])) for h in header))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = [{h: row[h] for h in header} for row in rows]
        return json.dumps(payload, indent=1) + "\n"
    raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")


def write_rows(path: str | Path, header: list[str], rows: list[dict], fmt: str = "csv") -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rows_to_text(header, rows, fmt))


def read_csv_rows(path: str | Path) -> tuple[list[str], list[dict]]:
    """Parse a CSV written by write_rows; numeric fields come back as floats."""
    text = Path(path).read_text().splitlines()
    header = text[0].split(",")
    rows = []
    for line in text[1:]:
        if not line:
            continue
        fields = line.split(",")  # writer only quotes when needed; data here never does
        row = {}
        for key, raw in zip(header, fields):
            if raw in ("true", "false"):
                row[key] = raw == "true"
            else:
                try:
                    row[key] = float(raw)
                except ValueError:
                    row[key] = raw
        rows.append(row)
    return header, rows
