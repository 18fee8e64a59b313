"""Report records shared by the verification campaigns and the CLI."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

__all__ = [
    "Verdict",
    "InequalityReport",
    "Trend",
    "ScanResult",
    "VERDICT_RTOL",
    "classify_trend",
]

# an inequality holds when slack >= -VERDICT_RTOL * max(1, |rhs|)
VERDICT_RTOL = 1e-9


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    DIVERGENT_INPUT = "divergent-input"
    INFORMATIONAL = "informational"


@dataclass(frozen=True)
class InequalityReport:
    """One inequality ``lhs <= rhs`` evaluated at a parameter point."""

    name: str
    lhs: float
    rhs: float
    slack: float
    params: Mapping[str, Any]
    verdict: Verdict
    details: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def from_sides(cls, name, lhs, rhs, params=None, details=None,
                   informational=False, divergent=False, rtol=VERDICT_RTOL):
        lhs, rhs = float(lhs), float(rhs)
        slack = rhs - lhs if not (math.isinf(lhs) and math.isinf(rhs)) else math.nan
        if divergent or not (math.isfinite(lhs) and math.isfinite(rhs)):
            verdict = Verdict.DIVERGENT_INPUT
        elif informational:
            verdict = Verdict.INFORMATIONAL
        elif slack >= -rtol * max(1.0, abs(rhs)):
            verdict = Verdict.HOLDS
        else:
            verdict = Verdict.FAILS
        return cls(name, lhs, rhs, slack, dict(params or {}), verdict, dict(details or {}))

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def failed(self) -> bool:
        return self.verdict is Verdict.FAILS

    def as_row(self) -> dict[str, Any]:
        row = {"name": self.name, **self.params, "lhs": self.lhs, "rhs": self.rhs,
               "slack": self.slack, "verdict": self.verdict.value}
        for k, v in self.details.items():
            row.setdefault(k, v)
        return row


class Trend(str, enum.Enum):
    DIVERGES = "diverges"
    CONVERGES = "converges_to"
    BOUNDED = "bounded"


@dataclass(frozen=True)
class ScanResult:
    """Ratios along a one-parameter sweep and the classified trend."""

    parameter_values: tuple[float, ...]
    ratios: tuple[float, ...]
    trend: Trend
    limit: float | None = None
    columns: Mapping[str, tuple[float, ...]] = field(default_factory=dict)
    name: str = ""
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.parameter_values) != len(self.ratios):
            raise ValueError("one ratio per parameter value is required")

    def rows(self) -> list[dict[str, Any]]:
        out = []
        for i, (x, r) in enumerate(zip(self.parameter_values, self.ratios)):
            row = {**self.params, "parameter": x}
            for k, col in self.columns.items():
                row[k] = col[i]
            row["ratio"] = r
            out.append(row)
        return out


def classify_trend(values: Sequence[float], ratios: Sequence[float],
                   limit_hint: float | None = None) -> tuple[Trend, float | None]:
    """Classify the tail (last third, at least three points) of a sweep.

    * ``converges_to``: successive differences shrink geometrically; the limit is
      extrapolated with an Aitken step (or ``limit_hint`` when supplied).
    * ``diverges``: monotone with non-shrinking growth, or infinite ratios.
    * ``bounded``: anything else.
    """
    r = np.asarray(ratios, dtype=float)
    if r.size < 3:
        return Trend.BOUNDED, None
    tail = r[-max(3, r.size // 3):]
    if np.any(np.isinf(tail)):
        return Trend.DIVERGES, None
    d = np.diff(tail)
    monotone = bool(np.all(d > 0) or np.all(d < 0))
    if monotone and np.all(d != 0):
        shrink = np.abs(d[1:]) / np.abs(d[:-1])
        if np.all(shrink < 0.9):
            if limit_hint is not None:
                return Trend.CONVERGES, float(limit_hint)
            q = float(shrink[-1])
            return Trend.CONVERGES, float(tail[-1] + d[-1] * q / (1.0 - q))
        if np.all(d > 0):
            return Trend.DIVERGES, None
    return Trend.BOUNDED, None
