"""Report serialization and the coefficient CSV format.

JSON: a list of ``{"experiment", "params", "results", "tool_version"}``
objects with sorted keys. CSV: one row per report with flattened, sorted
column names; reals are written with 17 significant digits and integers
exactly, so both formats round-trip.

Coefficient files hold lines ``alpha_1,...,alpha_n,re,im``. A header line is
optional, box entries not listed are zero, and a repeated ``alpha`` is an
error.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .expsums import CoeffBox
from .experiments import ExperimentReport

logger = logging.getLogger(__name__)


class CoeffFileError(ValueError):
    pass


def emit_json(reports: Iterable[ExperimentReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2) + "\n"


def parse_json(text: str) -> list[ExperimentReport]:
    data = json.loads(text)
    if isinstance(data, dict):
        data = [data]
    return [ExperimentReport.from_dict(d) for d in data]


def _flatten(prefix: str, value: Any, out: dict[str, Any]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    else:
        out[prefix] = value


def format_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return ";".join(format_value(x) for x in v)
    return str(v)


def emit_csv(reports: Iterable[ExperimentReport]) -> str:
    rows = []
    for r in reports:
        d = r.to_dict()
        flat: dict[str, Any] = {}
        _flatten("", d, flat)
        rows.append(flat)
    columns = sorted({k for row in rows for k in row})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def emit(reports: Iterable[ExperimentReport], fmt: str = "json") -> str:
    if fmt == "json":
        return emit_json(reports)
    if fmt == "csv":
        return emit_csv(reports)
    raise ValueError(f"unknown format {fmt!r}")


def load_coeff_file(path, n: int | None = None, N: int | None = None) -> CoeffBox:
    """Read a coefficient box from CSV.

    ``n`` defaults to the column count minus two and ``N`` to the largest
    ``|alpha_i|`` present. An empty file needs both.
    """
    text = Path(path).read_text()
    entries: dict[tuple[int, ...], complex] = {}
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        try:
            nums = [float(f) for f in fields]
        except ValueError:
            if not entries and width is None:
                continue  # header
            raise CoeffFileError(f"{path}:{lineno}: cannot parse {line!r}") from None
        if width is None:
            width = len(fields)
            if width < 3:
                raise CoeffFileError(f"{path}:{lineno}: need alpha_1..alpha_n,re,im")
            if n is not None and width != n + 2:
                raise CoeffFileError(f"{path}:{lineno}: expected {n + 2} columns for n={n}, got {width}")
        elif len(fields) != width:
            raise CoeffFileError(f"{path}:{lineno}: expected {width} columns, got {len(fields)}")
        if any(x != int(x) for x in nums[:-2]):
            raise CoeffFileError(f"{path}:{lineno}: alpha must be integer")
        alpha = tuple(int(x) for x in nums[:-2])
        if alpha in entries:
            raise CoeffFileError(f"{path}:{lineno}: duplicate alpha {alpha}")
        entries[alpha] = complex(nums[-2], nums[-1])
    if not entries:
        if n is None or N is None:
            raise CoeffFileError(f"{path}: empty coefficient file needs n and N")
        logger.warning("coefficient file %s is empty; using the zero box", path)
        return CoeffBox(n, N, values=np.zeros((2 * N + 1,) * n, dtype=complex))
    n = width - 2 if n is None else n
    if N is None:
        N = max(abs(a) for alpha in entries for a in alpha)
    values = np.zeros((2 * N + 1,) * n, dtype=complex)
    for alpha, v in entries.items():
        if max(abs(a) for a in alpha) > N:
            raise CoeffFileError(f"{path}: alpha {alpha} lies outside the box of radius {N}")
        values[tuple(a + N for a in alpha)] = v
    return CoeffBox(n, N, values=values)
