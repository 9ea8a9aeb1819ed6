"""Check reports: named residual verdicts with assumptions and notes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .expr import (
    NONZERO,
    SAMPLED_ZERO,
    SYMBOLIC_ZERO,
    DEFAULT_TOL,
    Expr,
    Verdict,
    is_zero,
)

__all__ = ["CheckItem", "CheckReport", "tensor_zero_verdict", "scalar_zero_verdict"]


@dataclass
class CheckItem:
    name: str
    verdict: Verdict

    @property
    def passed(self) -> bool:
        return self.verdict.passed

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.verdict}"


@dataclass
class CheckReport:
    title: str
    items: list[CheckItem] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def add(self, name: str, verdict: Verdict) -> None:
        self.items.append(CheckItem(name, verdict))

    def note(self, text: str) -> None:
        self.notes.append(text)

    def merge(self, other: "CheckReport") -> None:
        self.items.extend(other.items)
        self.notes.extend(other.notes)

    @property
    def max_residual(self) -> float:
        return max((item.verdict.max_residual for item in self.items), default=0.0)

    @property
    def assumptions(self) -> list[str]:
        seen: list[str] = []
        for item in self.items:
            for a in item.verdict.assumptions:
                if a not in seen:
                    seen.append(a)
        return seen

    def summary(self) -> str:
        lines = [f"== {self.title} =="]
        lines += [f"  note: {n}" for n in self.notes]
        lines += ["  " + item.line() for item in self.items]
        lines.append(f"  overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def scalar_zero_verdict(
    e: Expr,
    samples: Optional[Iterable[Sequence[float]]] = None,
    tol: float = DEFAULT_TOL,
) -> Verdict:
    return is_zero(e, samples=samples, tol=tol)


def tensor_zero_verdict(
    t,
    samples: Optional[Iterable[Sequence[float]]] = None,
    tol: float = DEFAULT_TOL,
) -> Verdict:
    """Aggregate component-wise zero verdicts of a form/multivector/pair."""
    comps: list[Expr]
    if hasattr(t, "primary"):  # pair types
        comps = list(t.primary.comps.values()) + list(t.secondary.comps.values())
    elif isinstance(t, Expr):
        comps = [t]
    else:
        comps = list(t.comps.values())
    pts = list(samples) if samples is not None else None
    worst: Optional[Verdict] = None
    sampled = False
    max_res = 0.0
    assumptions: list[str] = []
    for c in comps:
        v = is_zero(c, samples=pts, tol=tol)
        if v.kind == NONZERO:
            return v
        if v.kind == SAMPLED_ZERO:
            sampled = True
        max_res = max(max_res, v.max_residual)
        for a in v.assumptions:
            if a not in assumptions:
                assumptions.append(a)
    out = Verdict(SAMPLED_ZERO if sampled else SYMBOLIC_ZERO)
    out.max_residual = max_res
    out.assumptions = assumptions
    return out
