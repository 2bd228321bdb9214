"""Residual reports shared by the exact verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def format_exact(x) -> str:
    """Render an exact scalar as a rational literal ("p/q", or "p" when integral)."""
    return str(x)


@dataclass(frozen=True)
class Term:
    """One signed product of an identity, keyed by the exchange that produced it.

    ``rows``/``cols`` are 0-based indices of the input matrix.
    """

    family: str
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    value: Any

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rows": [i + 1 for i in self.rows],
            "cols": [j + 1 for j in self.cols],
            "value": format_exact(self.value),
        }


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of an exact identity (``relation="eq"``) or inequality (``"le"``) check.

    The residual is always ``lhs - rhs``; an equality holds iff it is zero and an
    inequality holds iff it is nonpositive.
    """

    identity: str
    k: int
    lhs: Any
    rhs: Any
    r: int | None = None
    c: int | None = None
    relation: str = "eq"
    terms: tuple[Term, ...] = ()
    extras: dict = field(default_factory=dict)

    @property
    def residual(self):
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        if self.relation == "eq":
            return self.residual == 0
        return self.residual <= 0

    def to_json(self, with_terms: bool = True) -> dict:
        out: dict = {
            "identity": self.identity,
            "k": self.k,
            "r": self.r,
            "c": self.c,
            "relation": self.relation,
            "lhs": format_exact(self.lhs),
            "rhs": format_exact(self.rhs),
            "residual": format_exact(self.residual),
            "holds": self.holds,
        }
        for key, val in self.extras.items():
            out[key] = _jsonable(val)
        out["terms"] = [t.to_json() for t in self.terms] if with_terms else []
        return out


def _jsonable(val):
    if isinstance(val, Fraction):
        return format_exact(val)
    if isinstance(val, (list, tuple)):
        return [_jsonable(v) for v in val]
    if isinstance(val, dict):
        return {k: _jsonable(v) for k, v in val.items()}
    if val is None or isinstance(val, (bool, int, float, str)):
        return val
    return str(val)
