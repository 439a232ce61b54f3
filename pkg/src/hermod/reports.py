"""Structured results returned by the mod-p analyzers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Verdict:
    subject: str
    question: str
    holds: bool
    p: int
    truncation: int
    method: str
    rigorous: bool = False
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "question": self.question,
            "holds": self.holds,
            "p": self.p,
            "truncation": self.truncation,
            "method": self.method,
            "rigorous": self.rigorous,
            "details": _jsonable(self.details),
        }


@dataclass(frozen=True)
class FiltrationReport:
    subject: str
    p: int
    value: int | None  # None means the reduction is zero
    candidates: tuple[int, ...]
    witness: tuple[tuple[str, int], ...]
    truncation: int
    rigorous: bool = False

    @property
    def zero_mod_p(self) -> bool:
        return self.value is None

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "p": self.p,
            "filtration": "ZeroModP" if self.value is None else self.value,
            "candidates": list(self.candidates),
            "witness": [[lab, c] for lab, c in self.witness],
            "truncation": self.truncation,
            "rigorous": self.rigorous,
        }


@dataclass(frozen=True)
class HeatCycleReport:
    subject: str
    p: int
    start: int | None          # filtration of the form itself
    filtrations: tuple          # filtrations of L^1 .. L^(p-1), None for zero
    high_points: tuple[int, ...]
    low_points: tuple[int, ...]
    heat_zero: bool
    checks: dict
    truncation: int
    rigorous: bool = False

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "p": self.p,
            "start": self.start,
            "filtrations": list(self.filtrations),
            "high_points": list(self.high_points),
            "low_points": list(self.low_points),
            "heat_zero": self.heat_zero,
            "checks": dict(self.checks),
            "truncation": self.truncation,
            "rigorous": self.rigorous,
        }


@dataclass(frozen=True)
class ScanReport:
    subject: str
    p: int
    verdicts: dict              # b -> bool
    method: str
    truncation: int
    rigorous: bool = False
    guard: dict = field(default_factory=dict)
    criterion: dict = field(default_factory=dict)   # b -> bool via the heat-power test

    @property
    def found(self) -> list[int]:
        return sorted(b for b, ok in self.verdicts.items() if ok)

    @property
    def agrees(self) -> bool:
        return all(self.criterion.get(b, v) == v for b, v in self.verdicts.items())

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "p": self.p,
            "verdicts": {str(b): v for b, v in sorted(self.verdicts.items())},
            "found": self.found,
            "criterion": {str(b): v for b, v in sorted(self.criterion.items())},
            "agrees": self.agrees,
            "method": self.method,
            "truncation": self.truncation,
            "rigorous": self.rigorous,
            "guard": _jsonable(self.guard),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    return x
