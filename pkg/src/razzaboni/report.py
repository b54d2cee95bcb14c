"""Structured verification results."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA = "razzaboni-report/1"


def summarize(arr) -> dict[str, Any]:
    """Max-norm, RMS and location of the largest magnitude (NaNs ignored)."""
    a = np.abs(np.asarray(arr, dtype=float))
    finite = np.isfinite(a)
    if not finite.any():
        return {"max": None, "l2": None, "argmax": None, "count": 0}
    masked = np.where(finite, a, -np.inf)
    loc = np.unravel_index(int(np.argmax(masked)), a.shape) if a.ndim else ()
    vals = a[finite]
    return {
        "max": float(vals.max()),
        "l2": float(np.sqrt(np.mean(vals**2))),
        "argmax": [int(i) for i in loc],
        "count": int(vals.size),
    }


@dataclass
class Criterion:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        text = f"[{mark}] {self.name}: {self.value:.3e} (tol {self.tolerance:.1e})"
        if "message" in self.detail:
            text += f" {self.detail.get('error', 'error')}: {self.detail['message']}"
        return text


@dataclass
class VerificationReport:
    """Named measurements, each with the tolerance it is judged against."""

    title: str
    criteria: list[Criterion] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)

    def check(self, name: str, value, tolerance: float, **detail) -> Criterion:
        """Record ``value <= tolerance``; arrays are reduced to their max-norm."""
        if np.ndim(value):
            summary = summarize(value)
            detail = {**summary, **detail}
            value = summary["max"]
        value = float(value) if value is not None else math.nan
        ok = bool(math.isfinite(value) and value <= tolerance)
        c = Criterion(name, value, float(tolerance), ok, detail)
        self.criteria.append(c)
        return c

    def note(self, key: str, value) -> None:
        self.notes[key] = value

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def __getitem__(self, name: str) -> Criterion:
        for c in self.criteria:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.criteria)

    def lines(self) -> list[str]:
        return [c.line() for c in self.criteria]

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "criteria": [
                {"name": c.name, "value": _num(c.value), "tolerance": c.tolerance,
                 "passed": c.passed, "detail": c.detail}
                for c in self.criteria
            ],
            "notes": self.notes,
        }


def _num(x):
    return x if math.isfinite(x) else None
