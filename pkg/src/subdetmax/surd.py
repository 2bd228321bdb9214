"""Exact scalars of the form a + b*sqrt(d) with rational a, b and squarefree d > 1.

Only needed for fixtures such as ``[I | c^(-1/2) H]`` with non-square ``c``.
Arithmetic that cancels the irrational part collapses back to ``Fraction``,
so surds mix freely with rational matrix entries.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def squarefree_split(c: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``c == s*s*d`` and ``d`` squarefree."""
    if c <= 0:
        raise ValueError("expected a positive integer")
    s, d = 1, c
    p = 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            s *= p
        p += 1
    return s, d


def _make(a, b, d):
    if b == 0:
        return Fraction(a)
    return QuadraticSurd(Fraction(a), Fraction(b), d)


class QuadraticSurd:
    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        s, sf = squarefree_split(d)
        if sf == 1:
            raise ValueError(f"sqrt({d}) is rational; use Fraction")
        self.a = Fraction(a)
        self.b = Fraction(b) * s
        self.d = sf

    @classmethod
    def sqrt(cls, c) -> "QuadraticSurd | Fraction":
        """Exact square root of a nonnegative rational."""
        c = Fraction(c)
        if c < 0:
            raise ValueError("negative radicand")
        # sqrt(p/q) = sqrt(p*q)/q
        s, d = squarefree_split(c.numerator * c.denominator) if c else (0, 1)
        if d == 1:
            return Fraction(s, c.denominator)
        return cls(0, Fraction(s, c.denominator), d)

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise ValueError(f"cannot mix sqrt({self.d}) and sqrt({other.d})")
            return other.a, other.b
        if isinstance(other, (int, Rational)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _make(self.a + o[0], self.b + o[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _make(self.a - o[0], self.b - o[1], self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _make(o[0] - self.a, o[1] - self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = o
        return _make(self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def _inverse(self):
        norm = self.a * self.a - self.b * self.b * self.d
        return _make(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o[1] == 0:
            if o[0] == 0:
                raise ZeroDivisionError("division by zero")
            return _make(self.a / o[0], self.b / o[0], self.d)
        return self * _make(o[0], o[1], self.d)._inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _make(o[0], o[1], self.d) * self._inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = Fraction(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: the larger square wins; equality is impossible for squarefree d
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return True  # b != 0 by construction

    def _cmp(self, other):
        diff = self - other
        if isinstance(diff, QuadraticSurd):
            return diff.sign()
        return (diff > 0) - (diff < 0)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o[0] and self.b == o[1]

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        if self._coerce(other) is None:
            return NotImplemented
        return self._cmp(other) < 0

    def __le__(self, other):
        if self._coerce(other) is None:
            return NotImplemented
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if self._coerce(other) is None:
            return NotImplemented
        return self._cmp(other) > 0

    def __ge__(self, other):
        if self._coerce(other) is None:
            return NotImplemented
        return self._cmp(other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadraticSurd({self.a!s}, {self.b!s}, {self.d})"

    def __str__(self):
        b = f"{self.b}*sqrt({self.d})"
        if self.a == 0:
            return b
        return f"{self.a}{'+' if self.b > 0 else ''}{b}"
