"""Uniform pass/fail records returned by the verification routines."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    check: str
    scope: str
    passed: bool
    counterexample: Any = None
    details: dict[str, Any] = field(default_factory=dict)
    seconds: float | None = None

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.check, "scope": self.scope,
                               "pass": self.passed}
        if not self.passed:
            out["counterexample"] = self.counterexample
        if self.details:
            out["details"] = self.details
        if self.seconds is not None:
            out["seconds"] = round(self.seconds, 3)
        return out


def combine(check: str, scope: str, verdicts: list[Verdict]) -> Verdict:
    failed = [v for v in verdicts if not v.passed]
    return Verdict(check, scope, not failed,
                   counterexample=failed[0].to_json() if failed else None,
                   details={"parts": [v.scope for v in verdicts]})
