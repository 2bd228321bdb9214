"""Maximum k x k subdeterminant: crude start, alpha-local search over 2-neighborhoods.

The pipeline is

1. ``crude_init``: pick rows by greedily maximizing a principal minor of the
   Gram matrix ``A A^T``, then columns the same way on ``C^T C`` with
   ``C = A[rows, :]``.  A zero determinant here certifies ``maxdet_k(A) = 0``.
2. ``local_search``: move to the best index pair within distance 2 while it
   beats the current one by a factor of more than ``1/alpha``.

``maxdet_oracle`` enumerates all submatrices and serves as the ground truth for
small instances.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .indices import IndexPair, neighborhood
from .matrix import (
    DEFAULT_LOG_FLOOR,
    EXACT,
    FLOAT,
    DetValue,
    Matrix,
    det_sub,
    det_sub_many,
)
from .plucker import exchange_factor
from .surd import QuadraticSurd


class SearchLimitExceeded(RuntimeError):
    """Local search ran past its iteration cap (indicates inconsistent comparisons)."""


class OracleCapExceeded(ValueError):
    pass


def _parse_alpha(alpha) -> Fraction:
    if isinstance(alpha, float):
        return Fraction(alpha).limit_denominator(10**12)
    return Fraction(alpha)


@dataclass(frozen=True)
class SearchConfig:
    k: int
    alpha: Fraction = Fraction(1, 2)
    max_iterations: int | None = None
    backend: str | None = None
    oracle_cap: int = 10**7
    log_floor: float = DEFAULT_LOG_FLOOR
    # relative tolerance on float improvement tests
    guard: float = 1e-12

    def __post_init__(self):
        alpha = _parse_alpha(self.alpha)
        if not 0 < alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.backend not in (None, FLOAT, EXACT):
            raise ValueError(f"unknown backend {self.backend!r}")
        object.__setattr__(self, "alpha", alpha)

    def prepare(self, A: Matrix) -> Matrix:
        if self.k > min(A.m, A.n):
            raise ValueError(f"k exceeds min(m,n): k={self.k}, shape {A.m}x{A.n}")
        return A.to_backend(self.backend) if self.backend else A


def improves(candidate: DetValue, current: DetValue, alpha: Fraction, guard: float = 1e-12) -> bool:
    """Whether ``alpha * |candidate| > |current|``.

    Float comparisons happen in log space and require the ratio to clear ``1 + guard``.
    """
    if candidate.is_zero:
        return False
    if current.is_zero:
        return True
    if candidate.backend == EXACT and current.backend == EXACT:
        return alpha * candidate.magnitude > current.magnitude
    gap = math.log(alpha) + candidate.log_abs - current.log_abs
    return gap > math.log1p(guard)


def _top_k_log_norm(norms: np.ndarray, k: int) -> float:
    with np.errstate(divide="ignore"):
        logs = np.sort(np.log(norms))[::-1][:k]
    return float(logs.sum())


def hadamard_log_bound(A: Matrix, k: int) -> float:
    """log of an upper bound on maxdet_k: product of the k largest row (or column) norms."""
    a = A.array
    rows = _top_k_log_norm(np.linalg.norm(a, axis=1), k)
    cols = _top_k_log_norm(np.linalg.norm(a, axis=0), k)
    return min(rows, cols)


def default_max_iterations(A: Matrix, k: int, alpha: Fraction, start: DetValue) -> int:
    """Step cap from the Hadamard bound: log_{1/alpha}(bound / |det start|) plus slack."""
    if start.is_zero:
        return 0
    span = hadamard_log_bound(A, k) - start.log_abs
    return max(0, math.ceil(span / -math.log(alpha))) + 2


@dataclass(frozen=True)
class TraceStep:
    pair: IndexPair
    det: DetValue
    accepted: IndexPair | None  # None marks the terminal entry

    def to_json(self, step: int) -> dict:
        out = {"step": step, **self.pair.to_json(), **det_json(self.det)}
        out["accepted"] = self.accepted.to_json() if self.accepted else None
        return out


@dataclass(frozen=True)
class SearchTrace:
    start: IndexPair
    iterations: tuple[TraceStep, ...]

    @property
    def result(self) -> IndexPair:
        return self.iterations[-1].pair

    @property
    def result_det(self) -> DetValue:
        return self.iterations[-1].det

    @property
    def steps(self) -> int:
        """Number of accepted moves."""
        return len(self.iterations) - 1


def local_search(A: Matrix, config: SearchConfig, S0: IndexPair) -> SearchTrace:
    """Best-improvement alpha-local search over the distance-2 neighborhood.

    Ties between equally good neighbors go to the lexicographically smallest.
    The returned pair is a (2, alpha)-local maximum.
    """
    A = config.prepare(A)
    if S0.k != config.k:
        raise ValueError(f"start pair has order {S0.k}, config asks for {config.k}")
    if not S0.in_range(A.m, A.n):
        raise IndexError(f"start pair {S0} out of range")
    cur = S0
    cur_det = det_sub(A, cur, log_floor=config.log_floor)
    if cur_det.is_zero:
        raise ValueError("local search needs a start with nonzero determinant")
    limit = config.max_iterations
    if limit is None:
        limit = default_max_iterations(A, config.k, config.alpha, cur_det)
    steps: list[TraceStep] = []
    while True:
        cands = list(neighborhood(cur, 2, A.m, A.n))
        dets = det_sub_many(A, cands, log_floor=config.log_floor)
        best = 0
        for i in range(1, len(cands)):
            if dets[i].abs() > dets[best].abs():
                best = i
        if not improves(dets[best], cur_det, config.alpha, config.guard):
            steps.append(TraceStep(cur, cur_det, None))
            return SearchTrace(S0, tuple(steps))
        if len(steps) >= limit:
            raise SearchLimitExceeded(f"no local maximum after {limit} moves")
        steps.append(TraceStep(cur, cur_det, cands[best]))
        cur, cur_det = cands[best], dets[best]


def _greedy_exact(B: Matrix, k: int) -> list[int]:
    n = B.m
    R = [list(r) for r in B.rows]
    chosen: list[int] = []
    free = list(range(n))
    for _ in range(k):
        p = max(free, key=lambda i: R[i][i])
        chosen.append(p)
        free.remove(p)
        piv = R[p][p]
        if piv == 0:
            continue
        col = [R[i][p] for i in range(n)]
        for i in free:
            f = col[i] / piv
            if f != 0:
                Ri, Rp = R[i], R[p]
                for j in free:
                    Ri[j] = Ri[j] - f * Rp[j]
    return chosen


def _greedy_float(B: np.ndarray, k: int) -> list[int]:
    n = B.shape[0]
    R = np.array(B, dtype=np.float64, copy=True)
    diag0 = float(np.max(np.abs(np.diag(R)))) if n else 0.0
    tol = 1e-12 * diag0
    free = np.ones(n, dtype=bool)
    chosen: list[int] = []
    for _ in range(k):
        d = np.where(free, np.diag(R), -np.inf)
        p = int(np.argmax(d))
        chosen.append(p)
        free[p] = False
        piv = R[p, p]
        if piv <= tol:
            continue
        R -= np.outer(R[:, p], R[p, :]) / piv
    return chosen


def greedy_psd_select(B: Matrix, k: int) -> tuple[int, ...]:
    """Greedily pick k indices maximizing the running principal minor of PSD ``B``.

    Each step adds the index with the largest Schur-complement pivot (lowest index
    on ties), i.e. pivoted Cholesky stopped after k pivots.
    """
    if k > B.m:
        raise ValueError("k exceeds matrix size")
    if B.backend == EXACT:
        return tuple(sorted(_greedy_exact(B, k)))
    return tuple(sorted(_greedy_float(B.array, k)))


def crude_init(A: Matrix, k: int) -> IndexPair:
    """Starting pair from two greedy Gram-matrix selections (rows, then columns).

    The result has nonzero determinant whenever rank(A) >= k; a zero determinant
    therefore certifies that every k x k minor vanishes.
    """
    if k < 0 or k > min(A.m, A.n):
        raise ValueError(f"k exceeds min(m,n): k={k}, shape {A.m}x{A.n}")
    if k == 0:
        return IndexPair.empty()
    rows = greedy_psd_select(A @ A.transpose(), k)
    C = A.select(rows, range(A.n))
    cols = greedy_psd_select(C.transpose() @ C, k)
    return IndexPair(rows, cols)


def maxdet_oracle(A: Matrix, k: int, cap: int = 10**7) -> tuple[IndexPair, DetValue]:
    """Exhaustive maxdet_k with the lexicographically smallest maximizer."""
    if k < 0 or k > min(A.m, A.n):
        raise ValueError(f"k exceeds min(m,n): k={k}, shape {A.m}x{A.n}")
    total = comb(A.m, k) * comb(A.n, k)
    if total > cap:
        raise OracleCapExceeded(f"{total} submatrices exceed the enumeration cap {cap}")
    col_sets = list(itertools.combinations(range(A.n), k))
    best_pair, best = None, None
    for rows in itertools.combinations(range(A.m), k):
        pairs = [IndexPair(rows, cols) for cols in col_sets]
        for P, d in zip(pairs, det_sub_many(A, pairs)):
            if best is None or d.abs() > best.abs():
                best_pair, best = P, d
    return best_pair, best


@dataclass(frozen=True)
class SearchResult:
    """Outcome of ``maximize``; ``trace`` is None for k=0 and for zero certificates."""

    k: int
    start: IndexPair
    start_det: DetValue
    result: IndexPair
    det: DetValue
    trace: SearchTrace | None
    zero_certificate: bool

    @property
    def iterations(self) -> int:
        return self.trace.steps if self.trace else 0


def maximize(A: Matrix, config: SearchConfig) -> SearchResult:
    """Crude start followed by local search; short-circuits when the start is singular."""
    A = config.prepare(A)
    k = config.k
    if k == 0:
        one = DetValue.one(A.backend)
        return SearchResult(0, IndexPair.empty(), one, IndexPair.empty(), one, None, False)
    S0 = crude_init(A, k)
    d0 = det_sub(A, S0, log_floor=config.log_floor)
    if d0.is_zero:
        return SearchResult(k, S0, d0, S0, d0, None, True)
    trace = local_search(A, config, S0)
    return SearchResult(k, S0, d0, trace.result, trace.result_det, trace, False)


def is_local_max(A: Matrix, S: IndexPair, alpha, guard: float = 1e-12) -> IndexPair | None:
    """Return None if S is a (2, alpha)-local maximum, else the first neighbor violating it."""
    alpha = _parse_alpha(alpha)
    d = det_sub(A, S)
    cands = list(neighborhood(S, 2, A.m, A.n))
    for T, dt in zip(cands, det_sub_many(A, cands)):
        if improves(dt, d, alpha, guard):
            return T
    return None


def ratio(numer: DetValue, denom: DetValue):
    """``|numer| / |denom|``: exact when both are exact, else a float; inf when only denom is 0."""
    if denom.is_zero:
        return Fraction(1) if numer.is_zero else math.inf
    if numer.backend == EXACT and denom.backend == EXACT:
        return numer.magnitude / denom.magnitude
    return math.exp(numer.log_abs - denom.log_abs) if not numer.is_zero else 0.0


def steps_upper_bound(optimum: DetValue, start: DetValue, alpha) -> int:
    """ceil(log_{1/alpha}(|optimum| / |start|)), computed exactly for exact inputs."""
    alpha = _parse_alpha(alpha)
    q = ratio(optimum, start)
    if isinstance(q, float):
        return max(0, math.ceil(math.log(q) / -math.log(alpha) - 1e-12))
    base = 1 / alpha
    t, power = 0, Fraction(1)
    while power < q:
        power *= base
        t += 1
    return t


@dataclass(frozen=True)
class CertificateReport:
    pair: IndexPair
    det: DetValue
    violating_neighbor: IndexPair | None
    optimum_pair: IndexPair
    optimum: DetValue
    ratio: object
    bound: Fraction

    @property
    def locally_maximal(self) -> bool:
        return self.violating_neighbor is None

    @property
    def holds(self) -> bool:
        if not self.locally_maximal:
            return False
        if isinstance(self.ratio, float):
            return math.log(self.ratio) <= _log_fraction(self.bound) if self.ratio > 0 else True
        return self.ratio <= self.bound

    def to_json(self) -> dict:
        return {
            **self.pair.to_json(),
            **det_json(self.det),
            "locally_maximal": self.locally_maximal,
            "violating_neighbor": (
                self.violating_neighbor.to_json() if self.violating_neighbor else None
            ),
            "optimum": {**self.optimum_pair.to_json(), **det_json(self.optimum)},
            "ratio": _num_json(self.ratio),
            "bound": str(self.bound),
            "holds": self.holds,
        }


def _log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def global_ratio_bound(k: int, alpha) -> Fraction:
    """((2k^2 + 8k) / alpha)^(2k): one exchange-inequality loss per unit of distance."""
    alpha = _parse_alpha(alpha)
    return (Fraction(exchange_factor(k)) / alpha) ** (2 * k)


def local_to_global_certificate(A: Matrix, S: IndexPair, config: SearchConfig) -> CertificateReport:
    """Compare a local maximum with the exhaustive optimum and the worst-case bound."""
    A = config.prepare(A)
    d = det_sub(A, S, log_floor=config.log_floor)
    bad = is_local_max(A, S, config.alpha, config.guard)
    opt_pair, opt = maxdet_oracle(A, S.k, config.oracle_cap)
    return CertificateReport(
        S, d, bad, opt_pair, opt, ratio(opt, d), global_ratio_bound(S.k, config.alpha)
    )


def _root_greater(x: DetValue, a: int, y: DetValue, b: int) -> bool:
    """|x|^(1/a) > |y|^(1/b), with the k=0 term read as 1."""
    if a == 0:
        x, a = DetValue.one(x.backend), 1
    if b == 0:
        y, b = DetValue.one(y.backend), 1
    if x.is_zero:
        return False
    if y.is_zero:
        return True
    if x.backend == EXACT and y.backend == EXACT:
        return x.magnitude ** b > y.magnitude ** a
    return x.log_abs / a > y.log_abs / b


def kth_root(d: DetValue, k: int) -> float:
    if k == 0:
        return 1.0
    if d.is_zero:
        return 0.0
    return math.exp(d.log_abs / k)


@dataclass(frozen=True)
class DetlbResult:
    value: float
    best_k: int
    table: tuple[SearchResult, ...]  # indexed by k, starting at k=0


def detlb(A: Matrix, config: SearchConfig | None = None) -> DetlbResult:
    """max over k of |det(A_S(k))|^(1/k), with S(k) from ``maximize``; k=0 contributes 1."""
    config = config or SearchConfig(k=0)
    table = []
    best_k = 0
    for k in range(min(A.m, A.n) + 1):
        res = maximize(A, dataclasses.replace(config, k=k))
        table.append(res)
        best = table[best_k]
        if _root_greater(res.det, k, best.det, best_k):
            best_k = k
    return DetlbResult(kth_root(table[best_k].det, best_k), best_k, tuple(table))


def sylvester_hadamard(k: int) -> list[list[int]]:
    if k < 1 or k & (k - 1):
        raise ValueError(f"Sylvester construction needs a power of two, got k={k}")
    H = [[1]]
    while len(H) < k:
        H = [r + r for r in H] + [r + [-x for x in r] for r in H]
    return H


def make_hadamard_fixture(k: int, c: int, backend: str = EXACT) -> Matrix:
    """The k x 2k matrix ``[I_k | c^(-1/2) H_k]``.

    Its identity block is a (c, 1)-local maximum, while the Hadamard block is
    better by a factor (k/c)^(k/2).  With the exact backend a non-square ``c``
    produces quadratic-surd entries.
    """
    if c < 1 or int(c) != c:
        raise ValueError("c must be a positive integer")
    H = sylvester_hadamard(k)
    if backend == EXACT:
        scale = QuadraticSurd.sqrt(Fraction(1, int(c)))
    else:
        scale = 1 / math.sqrt(c)
    rows = [[int(i == j) for j in range(k)] + [scale * h for h in H[i]] for i in range(k)]
    return Matrix(tuple(tuple(r) for r in rows), backend)


def make_diagonal_fixture(d, backend: str | None = None) -> Matrix:
    """diag(d_1, ..., d_n); every principal block is a local optimum for 1-swaps."""
    return Matrix.diagonal(list(d), backend)


def det_json(d: DetValue) -> dict:
    """Sign plus exact value ("det") or log10 magnitude, for JSON output."""
    if d.backend == EXACT:
        return {"sign": d.sign, "det": str(d.exact)}
    return {"sign": d.sign, "log10_abs_det": None if d.is_zero else d.magnitude / math.log(10)}


def _num_json(x):
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    return str(x)
