"""Structured verification reports shared by the axiom checkers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


def to_plain(value: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into JSON-friendly values."""
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if hasattr(value, "values") and isinstance(getattr(value, "values"), np.ndarray):
        return to_plain(value.values)
    return value


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    status: str
    worst_slack: float
    witness: Any = None
    samples: int = 0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        out = {
            "axiom": self.axiom,
            "status": self.status,
            "worst_slack": to_plain(self.worst_slack),
            "witness": to_plain(self.witness),
            "samples": self.samples,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a sampled axiom verification.

    A failing axiom is an outcome, never an exception. ``inconclusive``
    checks do not count as failures.
    """

    subject: str
    checks: tuple[AxiomCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, axiom: str) -> AxiomCheck:
        for c in self.checks:
            if c.axiom == axiom:
                return c
        raise KeyError(axiom)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
