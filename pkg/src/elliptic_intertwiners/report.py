"""Residual bookkeeping and the per-identity report record."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

#: entries below this fraction of the comparison scale are compared in absolute terms
ZERO_FLOOR = 1e-6


def rel_residual(a, b, scale: float = 0.0) -> float:
    """max |a - b| relative to the larger side, floored at ZERO_FLOOR * scale.

    Works for scalars and arrays; arrays are compared in the max norm.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    diff = float(np.max(np.abs(a - b))) if a.size else 0.0
    size = max(float(np.max(np.abs(a))) if a.size else 0.0, float(np.max(np.abs(b))) if b.size else 0.0)
    denom = max(size, ZERO_FLOOR * scale, 1e-300)
    if not math.isfinite(diff):
        return math.inf
    return diff / denom


class ResidualLog:
    """Collects residuals of one identity over draws and supports."""

    def __init__(self) -> None:
        self.values: list[float] = []
        self.draws = 0

    def add(self, value: float) -> None:
        v = float(value)
        self.values.append(v if math.isfinite(v) else math.inf)

    def extend(self, values) -> None:
        for v in values:
            self.add(v)

    @property
    def max(self) -> float:
        return max(self.values) if self.values else math.nan

    @property
    def mean(self) -> float:
        return sum(self.values) / len(self.values) if self.values else math.nan


@dataclass
class IdentityReport:
    """Outcome of checking one identity.

    ``passed`` holds exactly when the maximal residual does not exceed the
    tolerance; an empty or non-finite residual set is a failure.
    """

    suite: str
    identity: str
    anchor: str
    draws: int
    max_residual: float
    mean_residual: float
    tolerance: float
    passed: bool
    wall_ms: float = 0.0
    error: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_log(
        cls,
        suite: str,
        identity: str,
        anchor: str,
        log: ResidualLog,
        tolerance: float,
        wall_ms: float = 0.0,
        **details: Any,
    ) -> IdentityReport:
        mx = log.max
        ok = bool(log.values) and math.isfinite(mx) and mx <= tolerance
        return cls(suite, identity, anchor, log.draws, mx, log.mean, tolerance, ok, wall_ms, None, dict(details))

    @classmethod
    def failure(cls, suite: str, identity: str, anchor: str, tolerance: float, error: BaseException) -> IdentityReport:
        return cls(suite, identity, anchor, 0, math.nan, math.nan, tolerance, False, 0.0, f"{type(error).__name__}: {error}")

    def to_record(self, timing: bool = True) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "suite": self.suite,
            "identity": self.identity,
            "anchor": self.anchor,
            "draws": self.draws,
            "max_residual": _num(self.max_residual),
            "mean_residual": _num(self.mean_residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.error is not None:
            rec["error"] = self.error
        if self.details:
            rec["details"] = self.details
        if timing:
            rec["wall_ms"] = round(self.wall_ms, 3)
        return rec


def _num(x: float):
    # JSON has no NaN/inf; keep them readable as strings
    if math.isfinite(x):
        return x
    return str(x)


class Stopwatch:
    def __enter__(self) -> Stopwatch:
        self._t0 = time.perf_counter()
        self.ms = 0.0
        return self

    def __exit__(self, *exc) -> None:
        self.ms = (time.perf_counter() - self._t0) * 1000.0
