"""Check reports and their serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

FIELDS = ("name", "params", "lhs", "rhs", "slack", "tolerance", "pass", "truncation_flag", "notes")
SIG_DIGITS = 15


@dataclass(frozen=True)
class CheckReport:
    """One inequality ``lhs <= rhs`` (an identity is ``residual <= 0``).

    ``pass`` is derived: ``slack = rhs - lhs >= -tolerance``.
    """

    name: str
    lhs: float
    rhs: float
    tolerance: float
    params: dict = field(default_factory=dict)
    truncation_flag: bool = False
    notes: str = ""

    @property
    def slack(self) -> float:
        return float(self.rhs) - float(self.lhs)

    @property
    def passed(self) -> bool:
        s = self.slack
        return bool(math.isfinite(s) and s >= -self.tolerance)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "slack": self.slack,
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "truncation_flag": bool(self.truncation_flag),
            "notes": self.notes,
        }


def identity_report(name: str, residual: float, tolerance: float, **kw) -> CheckReport:
    """An identity check: pass iff ``residual <= tolerance``."""
    return CheckReport(name=name, lhs=float(residual), rhs=0.0, tolerance=tolerance, **kw)


def _num(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{SIG_DIGITS}g}")
    if isinstance(x, dict):
        return {str(k): _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    if hasattr(x, "item"):
        return _num(x.item())
    if isinstance(x, complex):
        return [_num(x.real), _num(x.imag)]
    return str(x)


def to_json(reports) -> str:
    rows = [_num(r.as_dict()) for r in reports]
    if not rows:
        return "[]"
    return json.dumps(rows, indent=2, sort_keys=False)


def to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for r in reports:
        row = _num(r.as_dict())
        row["params"] = json.dumps(row["params"], sort_keys=True)
        for k in ("pass", "truncation_flag"):
            row[k] = "true" if row[k] else "false"
        w.writerow([row[k] for k in FIELDS])
    return buf.getvalue()


def emit_report(reports, path, fmt: str = "json") -> None:
    """Write ``reports``; ``OSError`` propagates for unwritable paths."""
    reports = list(reports)
    if fmt == "json":
        text = to_json(reports)
    elif fmt == "csv":
        text = to_csv(reports)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")
