"""Structured check reports (JSON text and CSV)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field


@dataclass
class Check:
    name: str
    verdict: str  # pass | fail | supported | fails | inconclusive | evidence | none
    statistic: float | None = None
    tolerance: float | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool | None:
        if self.verdict in ("pass", "supported"):
            return True
        if self.verdict in ("fail", "fails"):
            return False
        return None


@dataclass
class ConvergenceReport:
    title: str
    checks: list[Check] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    heuristic: bool = False

    def add(self, name, verdict, statistic=None, tolerance=None, **metadata) -> Check:
        c = Check(name, verdict, _num(statistic), _num(tolerance), metadata)
        self.checks.append(c)
        return c

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "heuristic": self.heuristic,
            "metadata": _jsonable(self.metadata),
            "checks": [dict(_jsonable(asdict(c)), passed=c.passed) for c in self.checks],
        }

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "verdict", "statistic", "tolerance", "heuristic", "metadata"])
        for c in self.checks:
            w.writerow([
                c.name,
                c.verdict,
                "" if c.statistic is None else repr(c.statistic),
                "" if c.tolerance is None else repr(c.tolerance),
                int(self.heuristic),
                json.dumps(_jsonable(c.metadata), sort_keys=True),
            ])
        return buf.getvalue()

    def summary_lines(self) -> list[str]:
        out = []
        for c in self.checks:
            stat = "" if c.statistic is None else f" stat={c.statistic:.4g}"
            tol = "" if c.tolerance is None else f" tol={c.tolerance:.4g}"
            out.append(f"{c.verdict.upper():>12}  {c.name}{stat}{tol}")
        return out


def _num(x):
    return None if x is None else float(x)


def point_str(z: complex) -> str:
    if math.isinf(z.real):
        return "inf"
    re, im = z.real + 0.0, z.imag + 0.0  # no signed zeros
    return f"{re:.12g}{im:+.12g}i"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return point_str(obj)
    if hasattr(obj, "item") and hasattr(obj, "dtype"):
        return _jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj
