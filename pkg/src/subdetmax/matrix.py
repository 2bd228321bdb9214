"""Dense matrices over a float64 or exact-rational backend, and submatrix determinants.

Float determinants are carried as ``(sign, log|det|)`` so that products of many
subdeterminants can be compared without overflow. Exact determinants are
computed with no rounding: integer Bareiss elimination after clearing row
denominators, or plain field elimination when entries include quadratic surds.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .indices import IndexPair
from .report import IdentityReport, Term
from .surd import QuadraticSurd

FLOAT = "float"
EXACT = "exact"
BACKENDS = (FLOAT, EXACT)

#: |det| below exp(DEFAULT_LOG_FLOOR) counts as zero in the float backend.
DEFAULT_LOG_FLOOR = math.log(1e-300)
#: |det| at most DEFAULT_REL_TOL times the product of the row norms (Hadamard's
#: bound) also counts as zero: that is roundoff left over from a singular matrix.
DEFAULT_REL_TOL = 1e-12


class MatrixParseError(ValueError):
    pass


def _exact_scalar(x):
    if isinstance(x, QuadraticSurd):
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite entry {x!r}")
        return Fraction(float(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"unsupported exact entry {x!r}")


def _float_scalar(x) -> float:
    v = float(x)
    if not math.isfinite(v):
        raise ValueError(f"non-finite entry {x!r}")
    return v


@dataclass(frozen=True)
class Matrix:
    """Immutable dense ``m x n`` matrix.

    ``rows`` holds Python floats for the float backend and ``Fraction`` (or
    ``QuadraticSurd``) values for the exact backend.
    """

    rows: tuple[tuple, ...]
    backend: str

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        rows = tuple(tuple(r) for r in self.rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix rows")
        conv = _exact_scalar if self.backend == EXACT else _float_scalar
        object.__setattr__(self, "rows", tuple(tuple(conv(x) for x in r) for r in rows))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], backend: str | None = None) -> "Matrix":
        """Build a matrix; without ``backend``, any float entry selects the float backend."""
        rows = [list(r) for r in rows]
        if backend is None:
            has_float = any(isinstance(x, (float, np.floating)) for r in rows for x in r)
            backend = FLOAT if has_float else EXACT
        return cls(tuple(tuple(r) for r in rows), backend)

    @classmethod
    def identity(cls, n: int, backend: str = EXACT) -> "Matrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), backend)

    @classmethod
    def diagonal(cls, d: Sequence, backend: str | None = None) -> "Matrix":
        n = len(d)
        zero = 0.0 if any(isinstance(x, float) for x in d) else 0
        return cls.from_rows([[d[i] if i == j else zero for j in range(n)] for i in range(n)], backend)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    @property
    def entries(self) -> tuple:
        """Row-major flat view of the entries."""
        return tuple(itertools.chain.from_iterable(self.rows))

    @property
    def is_exact(self) -> bool:
        return self.backend == EXACT

    @functools.cached_property
    def array(self) -> np.ndarray:
        """Read-only float64 copy (rounded for the exact backend)."""
        a = np.array([[float(x) for x in r] for r in self.rows], dtype=np.float64)
        a.setflags(write=False)
        return a

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def to_backend(self, backend: str) -> "Matrix":
        if backend == self.backend:
            return self
        if backend == EXACT:
            return Matrix(self.rows, EXACT)
        return Matrix(tuple(tuple(float(x) for x in r) for r in self.rows), FLOAT)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> list[list]:
        return [[self.rows[i][j] for j in cols] for i in rows]

    def select(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(tuple(tuple(r) for r in self.submatrix(rows, cols)), self.backend)

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows)), self.backend)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.n != other.m:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.backend == FLOAT or other.backend == FLOAT:
            prod = self.array @ other.array
            return Matrix(tuple(map(tuple, prod.tolist())), FLOAT)
        cols = list(zip(*other.rows))
        out = tuple(tuple(_dot(r, c) for c in cols) for r in self.rows)
        return Matrix(out, EXACT)


def _dot(u, v):
    total = Fraction(0)
    for x, y in zip(u, v):
        if x and y:
            total = total + x * y
    return total


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class DetValue:
    """A determinant as ``sign`` in {-1, 0, 1} and a nonnegative ``magnitude``.

    In the float backend ``magnitude`` is ``log|det|`` (``-inf`` for zero); in the
    exact backend it is ``|det|`` itself.
    """

    sign: int
    magnitude: object
    backend: str

    @classmethod
    def one(cls, backend: str) -> "DetValue":
        return cls(1, 0.0 if backend == FLOAT else Fraction(1), backend)

    @classmethod
    def zero(cls, backend: str) -> "DetValue":
        return cls(0, -math.inf if backend == FLOAT else Fraction(0), backend)

    @classmethod
    def from_exact(cls, value) -> "DetValue":
        if isinstance(value, QuadraticSurd):
            s = value.sign()
        else:
            value = Fraction(value)
            s = (value > 0) - (value < 0)
        return cls(s, abs(value), EXACT)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def log_abs(self) -> float:
        """Natural log of |det|; ``-inf`` for zero."""
        if self.backend == FLOAT:
            return self.magnitude
        if self.sign == 0:
            return -math.inf
        return _log_exact(self.magnitude)

    @property
    def exact(self):
        """Signed exact value (exact backend only)."""
        if self.backend != EXACT:
            raise ValueError("float determinant has no exact value")
        return self.sign * self.magnitude

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.backend == EXACT:
            return float(self.exact)
        try:
            return self.sign * math.exp(self.magnitude)
        except OverflowError:
            return self.sign * math.inf

    def abs(self) -> "DetValue":
        return DetValue(abs(self.sign), self.magnitude, self.backend)

    def __eq__(self, other):
        if not isinstance(other, DetValue):
            return NotImplemented
        if self.backend == other.backend:
            if self.sign == 0 or other.sign == 0:
                return self.sign == other.sign
            return self.sign == other.sign and self.magnitude == other.magnitude
        return self._float_key() == other._float_key()

    def __hash__(self):
        return hash((self.sign, self.magnitude if self.sign else 0, self.backend))

    def __lt__(self, other):
        if not isinstance(other, DetValue):
            return NotImplemented
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.backend == other.backend:
            a, b = self.magnitude, other.magnitude
        else:
            a, b = self.log_abs, other.log_abs
        return a < b if self.sign > 0 else a > b

    def _float_key(self):
        return (self.sign, self.sign * self.log_abs if self.sign else 0.0)

    def __repr__(self):
        if self.backend == FLOAT:
            return f"DetValue(sign={self.sign}, log_abs={self.magnitude!r})"
        return f"DetValue({self.exact})"


def _log_exact(x) -> float:
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(float(x))


def _bareiss(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pkk = M[k][k]
        row_k = M[k]
        for i in range(k + 1, n):
            row_i = M[i]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pkk - mik * row_k[j]) // prev
        prev = pkk
    return sign * M[n - 1][n - 1]


def _field_det(M: list[list]):
    n = len(M)
    M = [list(r) for r in M]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        pkk = M[k][k]
        det = det * pkk
        for i in range(k + 1, n):
            f = M[i][k] / pkk
            if f != 0:
                M[i] = [a - f * b for a, b in zip(M[i], M[k])]
    return det


def exact_det(M: Sequence[Sequence]):
    """Exact determinant of a square matrix given as nested sequences."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    if all(isinstance(x, Fraction) for r in M for x in r):
        scale = 1
        ints = []
        for r in M:
            lcm = math.lcm(*(x.denominator for x in r))
            ints.append([x.numerator * (lcm // x.denominator) for x in r])
            scale *= lcm
        return Fraction(_bareiss(ints), scale)
    return _field_det(M)


def _check_pair(A: Matrix, S: IndexPair) -> None:
    if len(S.rows) != len(S.cols):
        raise ValueError("row and column index sets differ in size")
    if any(not 0 <= i < A.m for i in S.rows) or any(not 0 <= j < A.n for j in S.cols):
        raise IndexError(f"index pair {S} out of range for a {A.m}x{A.n} matrix")


def _float_detvalue(sign: float, logabs: float, log_floor: float, log_scale: float) -> DetValue:
    if sign == 0 or logabs < log_floor or logabs <= log_scale:
        return DetValue.zero(FLOAT)
    return DetValue(int(sign), float(logabs), FLOAT)


def _log_scale(sub: np.ndarray, rel_tol: float) -> np.ndarray:
    """log(rel_tol * product of row norms) for one or a stack of square blocks."""
    big = np.abs(sub).max(axis=-1, keepdims=True)
    safe = np.where(big > 0, big, 1.0)
    with np.errstate(divide="ignore"):
        logs = np.log(big[..., 0]) + np.log(np.linalg.norm(sub / safe, axis=-1))
    return logs.sum(axis=-1) + math.log(rel_tol)


def det_sub(
    A: Matrix,
    S: IndexPair,
    *,
    log_floor: float = DEFAULT_LOG_FLOOR,
    rel_tol: float = DEFAULT_REL_TOL,
) -> DetValue:
    """Determinant of ``A[S.rows, S.cols]``; the empty (k=0) determinant is one.

    In the float backend a result is zero when it falls below ``exp(log_floor)`` or
    below ``rel_tol`` times the product of the submatrix row norms.
    """
    _check_pair(A, S)
    if S.k == 0:
        return DetValue.one(A.backend)
    if A.backend == EXACT:
        return DetValue.from_exact(exact_det(A.submatrix(S.rows, S.cols)))
    sub = A.array[np.ix_(S.rows, S.cols)]
    sign, logabs = np.linalg.slogdet(sub)
    return _float_detvalue(sign, logabs, log_floor, float(_log_scale(sub, rel_tol)))


def det_sub_many(
    A: Matrix,
    pairs: Sequence[IndexPair],
    *,
    log_floor: float = DEFAULT_LOG_FLOOR,
    rel_tol: float = DEFAULT_REL_TOL,
) -> list[DetValue]:
    """``det_sub`` over many pairs of equal order; float mode uses one batched LU."""
    if A.backend == EXACT or not pairs or pairs[0].k == 0:
        return [det_sub(A, S, log_floor=log_floor, rel_tol=rel_tol) for S in pairs]
    for S in pairs:
        _check_pair(A, S)
    rows = np.array([S.rows for S in pairs], dtype=np.intp)
    cols = np.array([S.cols for S in pairs], dtype=np.intp)
    stack = A.array[rows[:, :, None], cols[:, None, :]]
    signs, logs = np.linalg.slogdet(stack)
    scales = _log_scale(stack, rel_tol)
    return [
        _float_detvalue(s, l, log_floor, c)
        for s, l, c in zip(signs.tolist(), logs.tolist(), scales.tolist())
    ]


def rank(A: Matrix) -> int:
    """Rank by exact elimination (exact backend) or SVD (float backend)."""
    if A.backend == FLOAT:
        return int(np.linalg.matrix_rank(A.array))
    M = [list(r) for r in A.rows]
    rk = 0
    for col in range(A.n):
        piv = next((i for i in range(rk, A.m) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        for i in range(rk + 1, A.m):
            f = M[i][col] / M[rk][col]
            if f != 0:
                M[i] = [a - f * b for a, b in zip(M[i], M[rk])]
        rk += 1
        if rk == A.m:
            break
    return rk


def cauchy_binet_check(A: Matrix, B: Matrix) -> IdentityReport:
    """Compare det(AB) with the sum over maximal minors, exactly."""
    if A.backend != EXACT or B.backend != EXACT:
        raise ValueError("Cauchy-Binet verification requires the exact backend")
    m, n = A.shape
    if B.shape != (n, m):
        raise ValueError(f"expected B of shape {(n, m)}, got {B.shape}")
    if m > n:
        raise ValueError("Cauchy-Binet check needs m <= n")
    lhs = exact_det((A @ B).rows)
    rows = tuple(range(m))
    terms = []
    for S in itertools.combinations(range(n), m):
        v = exact_det(A.submatrix(rows, S)) * exact_det(B.submatrix(S, rows))
        terms.append(Term("minor", (), S, v))
    rhs = sum((t.value for t in terms), Fraction(0))
    return IdentityReport("cauchy-binet", m, lhs, rhs, terms=tuple(terms))


# -- text format ---------------------------------------------------------------

_INT = re.compile(r"[+-]?\d+\Z")
_RAT = re.compile(r"[+-]?\d+/\d+\Z")
_DEC = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\Z")


def parse_matrix(text: str, backend: str | None = None) -> Matrix:
    """Parse the whitespace/comma separated matrix format.

    Entries are integers, decimals, or rationals ``p/q``. Rationals require the
    exact backend and cannot share a file with non-integer decimals. Blank lines
    and ``#`` comments are ignored.
    """
    if backend is not None and backend not in BACKENDS:
        raise MatrixParseError(f"unknown backend {backend!r}")
    rows: list[list[str]] = []
    kinds: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = [t for t in re.split(r"[,\s]+", line) if t]
        for t in toks:
            if _INT.match(t):
                continue
            if _RAT.match(t):
                if int(t.split("/")[1]) == 0:
                    raise MatrixParseError(f"line {lineno}: zero denominator in {t!r}")
                kinds.add("rational")
            elif _DEC.match(t):
                kinds.add("decimal")
            else:
                raise MatrixParseError(f"line {lineno}: cannot parse entry {t!r}")
        rows.append(toks)
    if not rows:
        raise MatrixParseError("empty matrix")
    if any(len(r) != len(rows[0]) for r in rows):
        raise MatrixParseError("rows have different lengths")
    if kinds == {"rational", "decimal"}:
        raise MatrixParseError("decimal and rational literals cannot be mixed")
    if "rational" in kinds:
        if backend == FLOAT:
            raise MatrixParseError("rational literals require the exact backend")
        backend = EXACT
    backend = backend or FLOAT
    if backend == EXACT:
        return Matrix(tuple(tuple(Fraction(t) for t in r) for r in rows), EXACT)
    return Matrix(tuple(tuple(float(t) for t in r) for r in rows), FLOAT)


def read_matrix(path: str | Path, backend: str | None = None) -> Matrix:
    return parse_matrix(Path(path).read_text(), backend)


def format_matrix(A: Matrix) -> str:
    """Inverse of ``parse_matrix`` (float entries use ``repr`` for round-tripping).

    Irrational exact entries have no literal form, so a matrix containing any is
    written entirely as decimals.
    """
    irrational = any(isinstance(x, QuadraticSurd) for x in A.entries)

    def fmt(x):
        if isinstance(x, Fraction) and not irrational:
            return str(x)
        return repr(float(x))

    return "".join(" ".join(fmt(x) for x in r) + "\n" for r in A.rows)
