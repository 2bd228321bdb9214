"""Extended Plücker relations for k x k minors of an m x n matrix, checked exactly.

For two index pairs S and T with row overlap r and column overlap c, five
signed sums over the 1- and 2-exchanges between them (``s1``, ``s2``,
``s2_hat``, ``s3``, ``s3_hat``) satisfy

    M [S][T] = 2 s1 - 2(k-1+r-2c) s2_hat - 2(k-1+c-2r) s2 - 4(s3 + s3_hat),

with M = (k-r)^2 + (k-c)^2 + (r-c)^2.  When S and T are disjoint this
reduces to  s1 - 2(k-1) s2 - 4 s3 = k^2 [S][T].

The exchange signs are rank-based and only correct when the rows/columns of
S ∪ T sit in canonical position (shared indices first, then those only in S,
then those only in T).  Every verifier therefore works on the canonically
reordered submatrix; reported terms are translated back to the caller's
indices.  Triangle inequality on the general identity yields the exchange
inequality |[S][T]| <= (2k^2 + 8k) * max_U |[S Δ U][T Δ U]|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .indices import (
    E1,
    E2,
    E2_HAT,
    E3,
    E3_HAT,
    Exchange,
    IndexPair,
    exchanges,
    overlaps,
    sign_delta,
)
from .matrix import EXACT, Matrix, det_sub
from .report import IdentityReport, Term


def _require_exact(A: Matrix) -> None:
    if A.backend != EXACT:
        raise ValueError("identity verification requires the exact backend")


@dataclass(frozen=True)
class Canonical:
    """``A`` restricted to S ∪ T and reordered into canonical position."""

    A: Matrix
    S: IndexPair
    T: IndexPair
    row_labels: tuple[int, ...]
    col_labels: tuple[int, ...]
    k: int
    r: int
    c: int

    def relabel(self, U: Exchange) -> tuple[tuple[int, ...], tuple[int, ...]]:
        rows = tuple(sorted(self.row_labels[i] for i in U.rows))
        cols = tuple(sorted(self.col_labels[j] for j in U.cols))
        return rows, cols


def _canonical_order(s: tuple[int, ...], t: tuple[int, ...]):
    shared = [i for i in s if i in t]
    return shared + [i for i in s if i not in t] + [i for i in t if i not in s], len(shared)


def canonicalize(A: Matrix, S: IndexPair, T: IndexPair) -> Canonical:
    """Move S ∪ T into canonical position.

    Rows become ``S = 0..k-1`` and ``T = 0..r-1, k..2k-r-1`` (columns likewise),
    keeping the original relative order inside each group.
    """
    r_order, r = _canonical_order(S.rows, T.rows)
    c_order, c = _canonical_order(S.cols, T.cols)
    k = S.k
    Ac = A.select(r_order, c_order)
    Sc = IndexPair(tuple(range(k)), tuple(range(k)))
    Tc = IndexPair(
        tuple(range(r)) + tuple(range(k, 2 * k - r)),
        tuple(range(c)) + tuple(range(k, 2 * k - c)),
    )
    return Canonical(Ac, Sc, Tc, tuple(r_order), tuple(c_order), k, r, c)


@dataclass(frozen=True)
class STerms:
    s1: Fraction
    s2: Fraction
    s2_hat: Fraction
    s3: Fraction
    s3_hat: Fraction
    k: int
    r: int
    c: int
    det_product: Fraction
    terms: tuple[Term, ...] = ()

    @property
    def M(self) -> int:
        return (self.k - self.r) ** 2 + (self.k - self.c) ** 2 + (self.r - self.c) ** 2


def _prefactor(family: str, k: int, r: int, c: int) -> int:
    if family == E1:
        return (-1) ** (r + c)
    if family == E2:
        return (-1) ** (k - r)
    if family == E2_HAT:
        return (-1) ** (k - c)
    return 1


def _s_terms(can: Canonical) -> STerms:
    A, S, T, k, r, c = can.A, can.S, can.T, can.k, can.r, can.c
    sums = dict.fromkeys((E1, E2, E2_HAT, E3, E3_HAT), Fraction(0))
    terms = []
    for U in exchanges(S, T):
        v = det_sub(A, S.apply(U)).exact * det_sub(A, T.apply(U)).exact
        if v:
            v = _prefactor(U.family, k, r, c) * sign_delta(U, S, T) * v
        sums[U.family] += v
        rows, cols = can.relabel(U)
        terms.append(Term(U.family, rows, cols, v))
    st = det_sub(A, S).exact * det_sub(A, T).exact
    return STerms(
        sums[E1], sums[E2], sums[E2_HAT], sums[E3], sums[E3_HAT], k, r, c, st, tuple(terms)
    )


def compute_s_terms(A: Matrix, S: IndexPair, T: IndexPair) -> STerms:
    """The five exchange sums of (S, T), evaluated in canonical position.

    ``det_product`` is ``[S][T]`` in that same canonical position, which is the
    quantity the sums relate to.
    """
    _require_exact(A)
    if S == T:
        raise ValueError("s-terms are undefined for S == T")
    if S.k < 1:
        raise ValueError("s-terms need k >= 1")
    return _s_terms(canonicalize(A, S, T))


def verify_disjoint_identity(A: Matrix, S: IndexPair, T: IndexPair) -> IdentityReport:
    """Check ``s1 - 2(k-1) s2 - 4 s3 == k^2 [S][T]`` for disjoint S, T."""
    _require_exact(A)
    r, c = overlaps(S, T)
    if r or c:
        raise ValueError("disjoint identity needs row- and column-disjoint index pairs")
    st = compute_s_terms(A, S, T)
    k = st.k
    lhs = st.s1 - 2 * (k - 1) * st.s2 - 4 * st.s3
    rhs = k * k * st.det_product
    terms = tuple(t for t in st.terms if t.family in (E1, E2, E3))
    return IdentityReport(
        "plucker-disjoint", k, lhs, rhs, r=0, c=0, terms=terms,
        extras={"s1": st.s1, "s2": st.s2, "s3": st.s3},
    )


def _extras(st: STerms) -> dict:
    return {
        "s1": st.s1,
        "s2": st.s2,
        "s2_hat": st.s2_hat,
        "s3": st.s3,
        "s3_hat": st.s3_hat,
        "M": st.M,
    }


def verify_general_identity(A: Matrix, S: IndexPair, T: IndexPair) -> IdentityReport:
    """Check the symmetric identity for arbitrary overlaps (S != T)."""
    _require_exact(A)
    st = compute_s_terms(A, S, T)
    k, r, c = st.k, st.r, st.c
    lhs = (
        2 * st.s1
        - 2 * (k - 1 + r - 2 * c) * st.s2_hat
        - 2 * (k - 1 + c - 2 * r) * st.s2
        - 4 * (st.s3 + st.s3_hat)
    )
    rhs = st.M * st.det_product
    return IdentityReport(
        "plucker-general", k, lhs, rhs, r=r, c=c, terms=st.terms, extras=_extras(st)
    )


def verify_row_relation(A: Matrix, S: IndexPair, T: IndexPair) -> IdentityReport:
    """The row half of the general identity:

    (k^2 - 2(k-1)r + 4 C(r,2) - rc) [S][T] = s1 - r s2_hat - (2(k-1) + c - 4r) s2 - 4 s3.
    """
    _require_exact(A)
    st = compute_s_terms(A, S, T)
    k, r, c = st.k, st.r, st.c
    lhs = st.s1 - r * st.s2_hat - (2 * (k - 1) + c - 4 * r) * st.s2 - 4 * st.s3
    rhs = (k * k - 2 * (k - 1) * r + 4 * comb(r, 2) - r * c) * st.det_product
    return IdentityReport("plucker-row", k, lhs, rhs, r=r, c=c, terms=st.terms, extras=_extras(st))


def verify_column_relation(A: Matrix, S: IndexPair, T: IndexPair) -> IdentityReport:
    """Transpose of ``verify_row_relation``."""
    _require_exact(A)
    st = compute_s_terms(A, S, T)
    k, r, c = st.k, st.r, st.c
    lhs = st.s1 - c * st.s2 - (2 * (k - 1) + r - 4 * c) * st.s2_hat - 4 * st.s3_hat
    rhs = (k * k - 2 * (k - 1) * c + 4 * comb(c, 2) - r * c) * st.det_product
    return IdentityReport(
        "plucker-column", k, lhs, rhs, r=r, c=c, terms=st.terms, extras=_extras(st)
    )


def exchange_factor(k: int) -> int:
    return 2 * k * k + 8 * k


def verify_exchange_inequality(A: Matrix, S: IndexPair, T: IndexPair) -> IdentityReport:
    """Check ``|[S][T]| <= (2k^2 + 8k) * gamma`` with gamma brute-forced over all exchanges."""
    _require_exact(A)
    if S == T:
        raise ValueError("exchange inequality needs S != T")
    lhs = abs(det_sub(A, S).exact * det_sub(A, T).exact)
    gamma = Fraction(0)
    best = None
    terms = []
    for U in exchanges(S, T):
        v = abs(det_sub(A, S.apply(U)).exact * det_sub(A, T.apply(U)).exact)
        terms.append(Term(U.family, U.rows, U.cols, v))
        if v > gamma:
            gamma, best = v, U
    factor = exchange_factor(S.k)
    r, c = overlaps(S, T)
    ratio = lhs / gamma if gamma else None
    return IdentityReport(
        "exchange", S.k, lhs, factor * gamma, r=r, c=c, relation="le", terms=tuple(terms),
        extras={
            "gamma": gamma,
            "factor": factor,
            "ratio": ratio,
            "argmax": best.to_json() if best is not None else None,
        },
    )


def lift_copies(A: Matrix, S: IndexPair, T: IndexPair) -> tuple[Matrix, IndexPair, IndexPair]:
    """Disjoint 2k x 2k lift of (S, T): shared rows/columns are duplicated.

    In canonical position, row ``k+i`` of the lift copies row ``i`` for each of the
    r shared rows (columns likewise), so the lifted pairs ``(0..k-1, 0..k-1)`` and
    ``(k..2k-1, k..2k-1)`` are disjoint.  Used to cross-check the general identity
    against the disjoint one.
    """
    _require_exact(A)
    can = canonicalize(A, S, T)
    k, r, c = can.k, can.r, can.c
    # canonical T-only block starts at k; the lift inserts r (resp. c) copies before it
    row_src = list(range(k)) + list(range(r)) + list(range(k, 2 * k - r))
    col_src = list(range(k)) + list(range(c)) + list(range(k, 2 * k - c))
    lifted = can.A.select(row_src, col_src)
    Ss = IndexPair(tuple(range(k)), tuple(range(k)))
    Ts = IndexPair(tuple(range(k, 2 * k)), tuple(range(k, 2 * k)))
    return lifted, Ss, Ts
