"""Self-describing CSV/JSON serialization shared by the CLI and the
trajectory export.

CSV layout: a `# kerr-bic v<version> <command>` banner, a header row, data
rows, then optional trailing `# comment` lines.  Floats are written with 17
significant digits so every value round-trips bit-exactly through the
bundled reader.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from pathlib import Path

from . import __version__

_INT_RE = re.compile(r"^-?\d+$")


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _parse_cell(cell: str):
    if cell == "":
        return None
    if cell == "true":
        return True
    if cell == "false":
        return False
    if _INT_RE.match(cell):
        return int(cell)
    try:
        return float(cell)
    except ValueError:
        return cell


@dataclass(frozen=True)
class CsvDocument:
    version: str
    command: str
    columns: tuple[str, ...]
    rows: tuple[dict, ...]
    comments: tuple[str, ...]


def write_csv(path_or_file, command: str, columns, rows, comments=()) -> None:
    """Write rows (sequences aligned with ``columns``) to a path or file."""

    def _emit(fh) -> None:
        fh.write(f"# kerr-bic v{__version__} {command}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
        for line in comments:
            fh.write(f"# {line}\n")

    if isinstance(path_or_file, (str, Path)):
        with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
            _emit(fh)
    else:
        _emit(path_or_file)


def read_csv(path_or_file) -> CsvDocument:
    """Parse a file produced by write_csv back into typed rows."""
    if isinstance(path_or_file, (str, Path)):
        with open(path_or_file, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    else:
        text = path_or_file.read()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# kerr-bic v"):
        raise ValueError("not a kerr-bic CSV: missing version banner")
    banner = lines[0][2:].split(None, 2)
    version = banner[1].lstrip("v")
    command = banner[2] if len(banner) > 2 else ""
    comments = [ln[2:] for ln in lines[1:] if ln.startswith("# ")]
    data_lines = [ln for ln in lines[1:] if ln and not ln.startswith("#")]
    reader = csv.reader(io.StringIO("\n".join(data_lines)))
    table = list(reader)
    if not table:
        raise ValueError("kerr-bic CSV has no header row")
    columns = tuple(table[0])
    rows = tuple(
        {col: _parse_cell(cell) for col, cell in zip(columns, row)} for row in table[1:]
    )
    return CsvDocument(
        version=version,
        command=command,
        columns=columns,
        rows=rows,
        comments=tuple(comments),
    )


def write_json(path_or_file, command: str, columns, rows, extra: dict | None = None) -> None:
    """Mirror the CSV records as an array of objects."""
    records = [dict(zip(columns, row)) for row in rows]
    doc = {"tool": "kerr-bic", "version": __version__, "command": command, "records": records}
    if extra:
        doc.update(extra)
    if isinstance(path_or_file, (str, Path)):
        with open(path_or_file, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    else:
        json.dump(doc, path_or_file, indent=2)
        path_or_file.write("\n")
