"""Shared result types for checks, property suites, and space validation.

A ``CheckResult`` records one verdict with an optional witness.  The status
taxonomy keeps exact and sampled evidence apart: ``PASS`` is reserved for
exhaustive or exact verification (finite spaces, closed-form identities),
``SAMPLED_PASS`` for finite sampling of a condition that quantifies over an
infinite domain, and ``VACUOUS`` for checks whose guard matched nothing.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any


class Status(str, Enum):
    PASS = "pass"
    SAMPLED_PASS = "sampled-pass"
    VACUOUS = "vacuous-pass"
    FAIL = "fail"
    UNCHECKED = "unchecked"


@dataclass
class CheckResult:
    """Outcome of one named check, with a witness on failure."""

    name: str
    status: Status
    witness: Any = None
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in (Status.PASS, Status.SAMPLED_PASS, Status.VACUOUS)

    @property
    def blocking(self) -> bool:
        return self.detail.get("blocking", True)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status.value,
            "witness": jsonable(self.witness),
            "detail": jsonable(self.detail),
        }


def passed(name: str, **detail: Any) -> CheckResult:
    return CheckResult(name, Status.PASS, detail=detail)


def sampled(name: str, **detail: Any) -> CheckResult:
    return CheckResult(name, Status.SAMPLED_PASS, detail=detail)


def vacuous(name: str, **detail: Any) -> CheckResult:
    return CheckResult(name, Status.VACUOUS, detail=detail)


def failed(name: str, witness: Any = None, **detail: Any) -> CheckResult:
    return CheckResult(name, Status.FAIL, witness=witness, detail=detail)


@dataclass
class PropertyReport:
    """A bundle of named checks plus free-form findings (e.g. checker
    inconsistencies that deserve attention even when nothing failed)."""

    name: str
    checks: dict[str, CheckResult] = field(default_factory=dict)
    findings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values()) and not self.findings

    def add(self, result: CheckResult) -> CheckResult:
        self.checks[result.name] = result
        return result

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "checks": {k: v.to_dict() for k, v in self.checks.items()},
            "findings": list(self.findings),
        }


@dataclass
class Violation:
    axiom: str
    witness: Any = None

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": jsonable(self.witness)}


@dataclass
class ValidationReport:
    """Axiom audit of a space: empty violation list means all axioms hold."""

    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, witness: Any = None) -> None:
        self.violations.append(Violation(axiom, witness))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "notes": list(self.notes),
        }


def jsonable(obj: Any) -> Any:
    """Convert nested results to JSON-safe values; rationals become 'p/q'."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Status):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if dataclasses.is_dataclass(obj):
        return jsonable(dataclasses.asdict(obj))
    return repr(obj)


def dumps(obj: Any) -> str:
    """Deterministic JSON for reports: sorted keys, stable float repr."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2)
