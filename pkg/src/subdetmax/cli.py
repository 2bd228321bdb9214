"""Command-line front end: ``subdetmax {maximize,detlb,oracle,verify,fixture}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 unreadable matrix.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from .matrix import BACKENDS, EXACT, MatrixParseError, format_matrix, read_matrix
from .search import (
    OracleCapExceeded,
    SearchConfig,
    det_json,
    detlb,
    kth_root,
    local_to_global_certificate,
    make_diagonal_fixture,
    make_hadamard_fixture,
    maxdet_oracle,
    maximize,
)
from .verify import KINDS, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


@dataclass(frozen=True)
class RunManifest:
    command: str
    input: str | None = None
    k: int | str | None = None
    alpha: str | None = None
    backend: str | None = None
    seed: int | None = None
    output: str | None = None


def _alpha(text: str) -> Fraction:
    try:
        a = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}")
    if not 0 < a < 1:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1)")
    return a


def _k_range(text: str) -> list[int]:
    try:
        for sep in ("..", "-"):
            if sep in text:
                lo, hi = (int(x) for x in text.split(sep, 1))
                return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid k range {text!r}")


def _float_list(text: str) -> list:
    out = []
    for tok in text.replace(",", " ").split():
        try:
            out.append(int(tok))
        except ValueError:
            try:
                out.append(Fraction(tok) if "/" in tok else float(tok))
            except ValueError:
                raise argparse.ArgumentTypeError(f"invalid diagonal entry {tok!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty diagonal")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subdetmax", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, k_required=False):
        sp.add_argument("matrix", help="matrix text file")
        if k_required:
            sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--backend", choices=BACKENDS, default=None)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("maximize", help="crude start + alpha-local search")
    common(sp, k_required=True)
    sp.add_argument("--alpha", type=_alpha, default=Fraction(1, 2))
    sp.add_argument("--trace", action="store_true", help="emit one JSON line per iteration")
    sp.add_argument("--oracle", action="store_true", help="also certify against exhaustive search")
    sp.add_argument("--oracle-cap", type=int, default=10**7)

    sp = sub.add_parser("detlb", help="determinant lower bound max_k maxdet_k^(1/k)")
    common(sp)
    sp.add_argument("--alpha", type=_alpha, default=Fraction(1, 2))

    sp = sub.add_parser("oracle", help="exhaustive maxdet_k")
    common(sp, k_required=True)
    sp.add_argument("--oracle-cap", type=int, default=10**7)

    sp = sub.add_parser("verify", help="exact checks on seeded random instances")
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--k", type=_k_range, default=[1, 2, 3], help="e.g. 1..3, 2, or 1,3")
    sp.add_argument("--m", type=int, default=None, help="rows (cauchy-binet)")
    sp.add_argument("--n", type=int, default=None, help="columns (cauchy-binet)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("fixture", help="write a test matrix in the text format")
    sp.add_argument("name", choices=("hadamard", "diagonal"))
    sp.add_argument("--k", type=int, default=None, help="hadamard order (power of two)")
    sp.add_argument("--c", type=int, default=1, help="hadamard swap budget")
    sp.add_argument("--d", type=_float_list, default=None, help="diagonal entries, e.g. 1,2,3")
    sp.add_argument("--backend", choices=BACKENDS, default=EXACT)
    sp.add_argument("--out", default=None)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj, compact: bool = False) -> str:
    if compact:
        return json.dumps(obj, separators=(",", ":")) + "\n"
    return json.dumps(obj, indent=2) + "\n"


def _load(args, parser):
    try:
        A = read_matrix(args.matrix, args.backend)
    except OSError as exc:
        print(f"subdetmax: cannot read {args.matrix}: {exc.strerror}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    except MatrixParseError as exc:
        print(f"subdetmax: {args.matrix}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    k = getattr(args, "k", None)
    if k is not None and not 0 <= k <= min(A.m, A.n):
        parser.error(f"k exceeds min(m,n): k={k}, matrix is {A.m}x{A.n}")
    return A


def cmd_maximize(args, parser) -> int:
    A = _load(args, parser)
    config = SearchConfig(k=args.k, alpha=args.alpha, oracle_cap=args.oracle_cap)
    res = maximize(A, config)
    manifest = RunManifest("maximize", args.matrix, args.k, str(args.alpha), A.backend, None, args.out)
    out = {
        "command": "maximize",
        "manifest": asdict(manifest),
        "m": A.m,
        "n": A.n,
        "k": args.k,
        "alpha": str(args.alpha),
        "backend": A.backend,
        "start": {**res.start.to_json(), **det_json(res.start_det)},
        "result": res.result.to_json(),
        **det_json(res.det),
        "iterations": res.iterations,
        "zero_certificate": res.zero_certificate,
    }
    if args.oracle:
        try:
            cert = local_to_global_certificate(A, res.result, config)
            out["oracle"] = cert.to_json()
        except OracleCapExceeded as exc:
            out["oracle"] = None
            out["oracle_error"] = str(exc)
    lines = []
    if args.trace and res.trace:
        lines = [_dumps(step.to_json(i), compact=True) for i, step in enumerate(res.trace.iterations)]
    _emit("".join(lines) + _dumps(out, compact=args.trace), args.out)
    return EXIT_OK


def cmd_detlb(args, parser) -> int:
    A = _load(args, parser)
    result = detlb(A, SearchConfig(k=0, alpha=args.alpha))
    table = []
    for k, res in enumerate(result.table):
        table.append({
            "k": k,
            **res.result.to_json(),
            **det_json(res.det),
            "root": kth_root(res.det, k),
            "zero_certificate": res.zero_certificate,
            "iterations": res.iterations,
        })
    manifest = RunManifest("detlb", args.matrix, None, str(args.alpha), A.backend, None, args.out)
    out = {
        "command": "detlb",
        "manifest": asdict(manifest),
        "backend": A.backend,
        "value": result.value,
        "best_k": result.best_k,
        "statement": f"max at k={result.best_k}",
        "table": table,
    }
    _emit(_dumps(out), args.out)
    return EXIT_OK


def cmd_oracle(args, parser) -> int:
    A = _load(args, parser)
    try:
        pair, d = maxdet_oracle(A, args.k, args.oracle_cap)
    except OracleCapExceeded as exc:
        parser.error(str(exc))
    manifest = RunManifest("oracle", args.matrix, args.k, None, A.backend, None, args.out)
    out = {
        "command": "oracle",
        "manifest": asdict(manifest),
        "k": args.k,
        "backend": A.backend,
        **pair.to_json(),
        **det_json(d),
    }
    _emit(_dumps(out), args.out)
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    if args.count < 0:
        parser.error("count must be nonnegative")
    if any(k < 1 for k in args.k):
        parser.error("verification needs k >= 1")
    if args.kind == "cauchy-binet" and args.m is not None:
        n = args.n if args.n is not None else args.m + 2
        if not 1 <= args.m <= n:
            parser.error("cauchy-binet needs 1 <= m <= n")
    summary = run_verification(args.kind, args.count, args.k, args.seed, args.m, args.n)
    k_label = f"{min(args.k)}..{max(args.k)}" if args.k else None
    manifest = RunManifest("verify", None, k_label, None, EXACT, args.seed, args.out)
    out = {"manifest": asdict(manifest), **summary.to_json()}
    _emit(_dumps(out), args.out)
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_fixture(args, parser) -> int:
    if args.name == "hadamard":
        if args.k is None:
            parser.error("hadamard fixture needs --k")
        try:
            A = make_hadamard_fixture(args.k, args.c, args.backend)
        except ValueError as exc:
            parser.error(str(exc))
    else:
        if args.d is None:
            parser.error("diagonal fixture needs --d")
        A = make_diagonal_fixture(args.d, args.backend)
    _emit(format_matrix(A), args.out)
    return EXIT_OK


COMMANDS = {
    "maximize": cmd_maximize,
    "detlb": cmd_detlb,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "fixture": cmd_fixture,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
