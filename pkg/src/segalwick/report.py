"""Verdicts for exact identity checks."""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Polynomial, first_difference


@dataclass
class Report:
    """Outcome of an exact identity check.

    ``mismatch`` holds the first differing exponent with the coefficient on
    each side, or None when the identity holds.
    """

    check: str
    holds: bool
    mismatch: tuple | None = None
    params: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        out = {"check": self.check, "holds": self.holds, "params": self.params}
        if self.mismatch is not None:
            exp, lhs, rhs = self.mismatch
            out["mismatch"] = {"exp": list(exp), "lhs": str(lhs), "rhs": str(rhs)}
        return out


def compare(check: str, lhs: Polynomial, rhs: Polynomial, **params) -> Report:
    diff = first_difference(lhs, rhs)
    return Report(check, diff is None, diff, params)
