"""Per-order residual bookkeeping shared by every identity check."""
from __future__ import annotations

from typing import Any, Dict

from .scalars import LambdaSeries

__all__ = ["Residual", "term_count", "series_residual"]


def term_count(obj: Any) -> int:
    """Number of non-zero elementary terms in an algebraic object."""
    if obj is None:
        return 0
    if isinstance(obj, LambdaSeries):
        return sum(term_count(c) for c in obj.coeffs.values())
    if hasattr(obj, "comps"):
        return sum(term_count(f) for f in obj.comps.values())
    if hasattr(obj, "terms"):
        return len(obj.terms)
    if isinstance(obj, (list, tuple)):
        return sum(term_count(x) for x in obj)
    return 1 if obj else 0


class Residual:
    """Residual term counts keyed by lambda-order (or any grading label)."""

    __slots__ = ("counts",)

    def __init__(self, counts: Dict[Any, int] | None = None):
        self.counts = {k: v for k, v in (counts or {}).items()}

    @property
    def ok(self) -> bool:
        return not any(self.counts.values())

    def __bool__(self):
        return self.ok

    def merge(self, other: "Residual") -> "Residual":
        out = dict(self.counts)
        for k, v in other.counts.items():
            out[k] = out.get(k, 0) + v
        return Residual(out)

    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> Dict[str, int]:
        return {str(k): v for k, v in sorted(self.counts.items(), key=lambda kv: str(kv[0]))}

    def __repr__(self):
        return "Residual(%s)" % self.to_json()


def series_residual(diff: LambdaSeries) -> Residual:
    counts = {d: 0 for d in range(diff.order + 1)}
    for d, c in diff.coeffs.items():
        counts[d] = term_count(c)
    return Residual(counts)
