"""Structured records for numerically checked inequalities."""

from dataclasses import dataclass, field
import math


@dataclass(frozen=True)
class Check:
    """One inequality lhs <= rhs (or its mirror), with margin rhs - lhs."""

    inequality: str
    lhs: float
    rhs: float
    inputs: dict = field(default_factory=dict)
    tol: float = 1e-9

    @property
    def margin(self):
        if math.isinf(self.rhs) and self.rhs > 0:
            return math.inf
        return self.rhs - self.lhs

    @property
    def passed(self):
        m = self.margin
        return not math.isnan(m) and m >= -self.tol

    def as_dict(self):
        return {
            "inequality": self.inequality,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "margin": self.margin,
            "passed": self.passed,
            "rhs": self.rhs,
        }


def leq(name, lhs, rhs, tol=1e-9, **inputs):
    """Check lhs <= rhs with absolute tolerance scaled by the magnitude of the sides."""
    scale = max(1.0, abs(lhs), abs(rhs)) if math.isfinite(lhs) and math.isfinite(rhs) else 1.0
    return Check(name, float(lhs), float(rhs), dict(inputs), tol * scale)


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, check):
        self.checks.append(check)
        return check

    def extend(self, other):
        self.checks.extend(other.checks if isinstance(other, Report) else other)

    @property
    def violations(self):
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self):
        return not self.violations

    def min_margin(self, name=None):
        ms = [c.margin for c in self.checks if name is None or c.inequality == name]
        return min(ms) if ms else math.inf

    def as_dict(self):
        return {
            "n_checks": len(self.checks),
            "n_violations": len(self.violations),
            "violations": [c.as_dict() for c in self.violations],
        }
