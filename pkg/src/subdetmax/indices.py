"""Index pairs (row set, column set), distances, neighborhoods and exchanges.

Indices are 0-based inside the library. ``IndexPair.one_based`` and the JSON
helpers convert at the boundary, where the 1-based ``[n]`` convention is used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

E1, E2, E2_HAT, E3, E3_HAT = "E1", "E2", "E2_hat", "E3", "E3_hat"
FAMILIES = (E1, E2, E2_HAT, E3, E3_HAT)


def _as_sorted(idx: Sequence[int], what: str) -> tuple[int, ...]:
    t = tuple(sorted(int(i) for i in idx))
    if len(set(t)) != len(t):
        raise ValueError(f"duplicate {what} indices in {list(idx)}")
    if t and t[0] < 0:
        raise ValueError(f"negative {what} index in {list(idx)}")
    return t


@dataclass(frozen=True, order=True)
class IndexPair:
    """A k x k submatrix selector. Ordering is lexicographic on (rows, cols)."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        rows = _as_sorted(self.rows, "row")
        cols = _as_sorted(self.cols, "column")
        if len(rows) != len(cols):
            raise ValueError(f"|rows|={len(rows)} differs from |cols|={len(cols)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def one_based(cls, rows: Sequence[int], cols: Sequence[int]) -> "IndexPair":
        if any(i < 1 for i in rows) or any(j < 1 for j in cols):
            raise ValueError("1-based indices must be positive")
        return cls(tuple(i - 1 for i in rows), tuple(j - 1 for j in cols))

    @classmethod
    def empty(cls) -> "IndexPair":
        return cls((), ())

    @classmethod
    def from_json(cls, obj: dict) -> "IndexPair":
        return cls.one_based(obj["rows"], obj["cols"])

    @property
    def k(self) -> int:
        return len(self.rows)

    def to_json(self) -> dict:
        return {"rows": [i + 1 for i in self.rows], "cols": [j + 1 for j in self.cols]}

    def apply(self, U: "Exchange") -> "IndexPair":
        """Symmetric difference ``S Δ U``."""
        return IndexPair(
            tuple(set(self.rows) ^ set(U.rows)), tuple(set(self.cols) ^ set(U.cols))
        )

    def in_range(self, m: int, n: int) -> bool:
        return all(i < m for i in self.rows) and all(j < n for j in self.cols)

    def __str__(self):
        return f"({list(self.to_json()['rows'])}, {list(self.to_json()['cols'])})"


@dataclass(frozen=True)
class Exchange:
    """``U = (rows, cols)``: indices swapped between two index pairs.

    ``family`` names the block of the exchange family the move belongs to.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    family: str = ""

    @property
    def size(self) -> int:
        return len(self.rows) + len(self.cols)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rows": [i + 1 for i in self.rows],
            "cols": [j + 1 for j in self.cols],
        }


def _same_order(S: IndexPair, T: IndexPair) -> None:
    if S.k != T.k:
        raise ValueError(f"index pairs of different order {S.k} and {T.k}")


def distance(S: IndexPair, T: IndexPair) -> int:
    _same_order(S, T)
    dr = len(set(S.rows) ^ set(T.rows))
    dc = len(set(S.cols) ^ set(T.cols))
    return dr // 2 + dc // 2


def _swaps(base: tuple[int, ...], size: int, a: int) -> list[tuple[int, ...]]:
    """All k-subsets of range(size) differing from ``base`` in exactly ``a`` elements."""
    inside = set(base)
    outside = [i for i in range(size) if i not in inside]
    out = []
    for drop in itertools.combinations(base, a):
        kept = inside.difference(drop)
        for add in itertools.combinations(outside, a):
            out.append(tuple(sorted(kept.union(add))))
    return out


def neighborhood(S: IndexPair, radius: int, m: int, n: int) -> Iterator[IndexPair]:
    """Every ``T`` with ``distance(S, T) <= radius`` (``S`` included), in lexicographic order."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if not S.in_range(m, n):
        raise IndexError(f"{S} out of range for a {m}x{n} matrix")
    k = S.k
    row_moves = [
        (a, rows) for a in range(min(radius, k, m - k) + 1) for rows in _swaps(S.rows, m, a)
    ]
    col_moves = [
        (b, cols) for b in range(min(radius, k, n - k) + 1) for cols in _swaps(S.cols, n, b)
    ]
    pairs = [
        IndexPair(rows, cols)
        for a, rows in row_moves
        for b, cols in col_moves
        if a + b <= radius
    ]
    pairs.sort()
    return iter(pairs)


def overlaps(S: IndexPair, T: IndexPair) -> tuple[int, int]:
    """``(r, c)`` = sizes of the row and column intersections."""
    _same_order(S, T)
    return len(set(S.rows) & set(T.rows)), len(set(S.cols) & set(T.cols))


def exchanges(S: IndexPair, T: IndexPair) -> Iterator[Exchange]:
    """Enumerate the 1- and 2-exchanges between ``S`` and ``T``.

    Families come in the order E1 (one row and one column), E2 (one row),
    E2_hat (one column), E3 (two rows), E3_hat (two columns); each family is
    lexicographic.
    """
    _same_order(S, T)
    if S == T:
        raise ValueError("exchanges between identical index pairs are undefined")
    s_rows = [i for i in S.rows if i not in T.rows]
    t_rows = [i for i in T.rows if i not in S.rows]
    s_cols = [j for j in S.cols if j not in T.cols]
    t_cols = [j for j in T.cols if j not in S.cols]
    for i, ip, j, jp in itertools.product(s_rows, t_rows, s_cols, t_cols):
        yield Exchange(tuple(sorted((i, ip))), tuple(sorted((j, jp))), E1)
    for i, ip in itertools.product(s_rows, t_rows):
        yield Exchange(tuple(sorted((i, ip))), (), E2)
    for j, jp in itertools.product(s_cols, t_cols):
        yield Exchange((), tuple(sorted((j, jp))), E2_HAT)
    for ih, ihp in itertools.product(
        itertools.combinations(s_rows, 2), itertools.combinations(t_rows, 2)
    ):
        yield Exchange(tuple(sorted(ih + ihp)), (), E3)
    for jl, jlp in itertools.product(
        itertools.combinations(s_cols, 2), itertools.combinations(t_cols, 2)
    ):
        yield Exchange((), tuple(sorted(jl + jlp)), E3_HAT)


def exchange_count(k: int, r: int, c: int) -> int:
    """Closed-form size of the exchange family for overlaps ``r``, ``c``."""
    a, b = k - r, k - c
    return a * a * b * b + a * a + b * b + (a * (a - 1) // 2) ** 2 + (b * (b - 1) // 2) ** 2


def _rank_in(L: Sequence[int], x: int) -> int:
    return sum(1 for y in L if y < x)


def sign_delta(U: Exchange, S: IndexPair, T: IndexPair) -> int:
    """The sign ``(-1)^(sum of home-set ranks)`` attached to an exchange.

    Each exchanged index is ranked inside whichever of S, T contains it.
    """
    total = 0
    for idx, s_side, t_side in ((U.rows, S.rows, T.rows), (U.cols, S.cols, T.cols)):
        for x in idx:
            in_s, in_t = x in s_side, x in t_side
            if in_s == in_t:
                raise ValueError(f"index {x + 1} is not in the symmetric difference")
            total += _rank_in(s_side if in_s else t_side, x)
    return -1 if total % 2 else 1
