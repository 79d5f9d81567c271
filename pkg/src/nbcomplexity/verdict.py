from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verdict:
    """Outcome of a property check; falsy when the property fails."""

    holds: bool
    counterexample: object = None
    detail: str = ""
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def to_dict(self):
        out = {"holds": self.holds}
        if self.counterexample is not None:
            out["counterexample"] = _plain(self.counterexample)
        if self.detail:
            out["detail"] = self.detail
        if self.data:
            out["data"] = _plain(self.data)
        return out


def _plain(obj):
    """Recursively convert sets/tuples/Fractions into JSON-friendly values."""
    from fractions import Fraction

    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, Fraction):
        return str(obj)
    return obj
