"""Seeded random-instance batches for the exact verifiers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .indices import IndexPair
from .matrix import EXACT, Matrix, cauchy_binet_check
from .plucker import verify_disjoint_identity, verify_exchange_inequality, verify_general_identity
from .report import IdentityReport

KINDS = ("plucker-disjoint", "plucker-general", "exchange", "cauchy-binet")


def instance_rng(seed: int, *labels) -> random.Random:
    """Independent deterministic stream per (seed, configuration)."""
    return random.Random("/".join(str(x) for x in (seed, *labels)))


def random_int_matrix(rng: random.Random, m: int, n: int, bound: int = 9) -> Matrix:
    rows = tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(m))
    return Matrix(rows, EXACT)


def random_pair(rng: random.Random, m: int, n: int, k: int) -> IndexPair:
    return IndexPair(tuple(rng.sample(range(m), k)), tuple(rng.sample(range(n), k)))


def _split(rng: random.Random, size: int, k: int, shared: int):
    pool = rng.sample(range(size), 2 * k - shared)
    common, s_only, t_only = pool[:shared], pool[shared:k], pool[k:]
    return tuple(common + s_only), tuple(common + t_only)


def random_pairs_with_overlap(
    rng: random.Random, m: int, n: int, k: int, r: int, c: int
) -> tuple[IndexPair, IndexPair]:
    """Random S, T of order k with exactly r shared rows and c shared columns."""
    if 2 * k - r > m or 2 * k - c > n:
        raise ValueError("matrix too small for the requested overlap")
    s_rows, t_rows = _split(rng, m, k, r)
    s_cols, t_cols = _split(rng, n, k, c)
    return IndexPair(s_rows, s_cols), IndexPair(t_rows, t_cols)


def disjoint_instances(seed: int, k: int, count: int) -> Iterator[tuple[Matrix, IndexPair, IndexPair]]:
    rng = instance_rng(seed, "plucker-disjoint", k)
    for _ in range(count):
        A = random_int_matrix(rng, 2 * k, 2 * k)
        S, T = random_pairs_with_overlap(rng, 2 * k, 2 * k, k, 0, 0)
        yield A, S, T


def general_instances(
    seed: int, k: int, r: int, c: int, count: int
) -> Iterator[tuple[Matrix, IndexPair, IndexPair]]:
    rng = instance_rng(seed, "plucker-general", k, r, c)
    for _ in range(count):
        A = random_int_matrix(rng, 2 * k, 2 * k)
        S, T = random_pairs_with_overlap(rng, 2 * k, 2 * k, k, r, c)
        yield A, S, T


def exchange_instances(
    seed: int, k: int, count: int, max_dim: int = 7
) -> Iterator[tuple[Matrix, IndexPair, IndexPair]]:
    """Random A of size at most max_dim x max_dim with random S != T."""
    rng = instance_rng(seed, "exchange", k)
    produced = 0
    while produced < count:
        m, n = rng.randint(k, max_dim), rng.randint(k, max_dim)
        if m == k and n == k:
            continue
        A = random_int_matrix(rng, m, n)
        S, T = random_pair(rng, m, n, k), random_pair(rng, m, n, k)
        if S == T:
            continue
        produced += 1
        yield A, S, T


def cauchy_binet_instances(seed: int, m: int, n: int, count: int) -> Iterator[tuple[Matrix, Matrix]]:
    rng = instance_rng(seed, "cauchy-binet", m, n)
    for _ in range(count):
        yield random_int_matrix(rng, m, n, 5), random_int_matrix(rng, n, m, 5)


@dataclass
class VerifySummary:
    kind: str
    seed: int
    count: int
    configurations: list[dict] = field(default_factory=list)
    passed: int = 0
    failed: int = 0
    first_failure: IdentityReport | None = None
    max_ratio: Fraction | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, config: dict, reports: Sequence[IdentityReport]) -> None:
        good = sum(rep.holds for rep in reports)
        self.configurations.append({**config, "passed": good, "failed": len(reports) - good})
        self.passed += good
        self.failed += len(reports) - good
        if self.first_failure is None:
            self.first_failure = next((rep for rep in reports if not rep.holds), None)

    def to_json(self) -> dict:
        out = {
            "command": "verify",
            "kind": self.kind,
            "seed": self.seed,
            "count": self.count,
            "passed": self.passed,
            "failed": self.failed,
            "configurations": self.configurations,
            "first_failure": self.first_failure.to_json() if self.first_failure else None,
        }
        if self.kind == "exchange":
            out["max_ratio"] = None if self.max_ratio is None else str(self.max_ratio)
            out["max_ratio_float"] = None if self.max_ratio is None else float(self.max_ratio)
        return out


def run_verification(
    kind: str,
    count: int,
    ks: Sequence[int],
    seed: int = 0,
    m: int | None = None,
    n: int | None = None,
) -> VerifySummary:
    """Run ``count`` seeded instances per configuration of the requested kind."""
    if kind not in KINDS:
        raise ValueError(f"unknown verification kind {kind!r}")
    summary = VerifySummary(kind, seed, count)
    if kind == "plucker-disjoint":
        for k in ks:
            reps = [verify_disjoint_identity(*inst) for inst in disjoint_instances(seed, k, count)]
            summary.record({"k": k}, reps)
    elif kind == "plucker-general":
        for k in ks:
            for r in range(k + 1):
                for c in range(k + 1):
                    if (r, c) == (k, k):
                        continue
                    reps = [
                        verify_general_identity(*inst)
                        for inst in general_instances(seed, k, r, c, count)
                    ]
                    summary.record({"k": k, "r": r, "c": c}, reps)
    elif kind == "exchange":
        for k in ks:
            reps = [verify_exchange_inequality(*inst) for inst in exchange_instances(seed, k, count)]
            summary.record({"k": k}, reps)
            for rep in reps:
                q = rep.extras["ratio"]
                if q is not None and (summary.max_ratio is None or q > summary.max_ratio):
                    summary.max_ratio = q
    else:
        dims = [(m, n)] if m is not None else [(k, k + 2) for k in ks]
        for mm, nn in dims:
            nn = nn if nn is not None else mm + 2
            reps = [cauchy_binet_check(A, B) for A, B in cauchy_binet_instances(seed, mm, nn, count)]
            summary.record({"m": mm, "n": nn}, reps)
    return summary
