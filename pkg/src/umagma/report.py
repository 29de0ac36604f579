"""Validation reports and the error hierarchy shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class StructuralError(ValueError):
    """Input is malformed: sizes disagree or indices fall outside a carrier."""


class PreconditionError(ValueError):
    """Input is well formed but violates an operation's precondition."""

    def __init__(self, message: str, report: "ValidationReport | None" = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Violation:
    """One failed axiom instance.

    ``witness`` holds the element indices that exhibit the failure and
    ``detail`` carries optional intermediate values (both sides of an
    equation, lookups used along the way).
    """

    axiom: str
    witness: tuple
    detail: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"axiom": self.axiom, "witness": list(self.witness)}
        if self.detail:
            out["detail"] = dict(self.detail)
        return out


class ValidationReport(list):
    """A list of :class:`Violation`; empty means valid."""

    @property
    def valid(self) -> bool:
        return not self

    def add(self, axiom: str, *witness, **detail) -> None:
        self.append(Violation(axiom, tuple(witness), detail))

    def axioms(self) -> set[str]:
        return {v.axiom for v in self}

    def first(self, axiom: str | None = None) -> Violation | None:
        for v in self:
            if axiom is None or v.axiom == axiom:
                return v
        return None

    def to_json(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_json() for v in self]}

    def __repr__(self) -> str:
        if self.valid:
            return "ValidationReport(valid)"
        return f"ValidationReport({list.__repr__(self)})"
