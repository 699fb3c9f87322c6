"""Command-line interface.

    lsid solve  --matrix A.csv --rhs b.csv [--method pseudo|subset|monte-carlo]
    lsid verify --matrix A.csv [--checks identity,cauchy-binet,lemmas]
    lsid bench  --m 10 --n 3 --trials 5 --seed 7

Exit codes: 0 success, 1 failed check or cross-route disagreement,
2 I/O, parse or usage error, 3 rank-deficient or singular input,
4 subset enumeration cap exceeded. Machine-readable output goes to stdout
(or --out); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import calculus
from .config import DEFAULT_TOLERANCES
from .dense import pseudo_inverse_solve
from .errors import (
    AllSampledSingularError,
    CapExceededError,
    DimensionMismatchError,
    FormatError,
    InvalidRangeError,
    NonFiniteError,
    RankDeficientError,
    SingularMatrixError,
)
from .formats import Report, dumps_report, read_instance, read_matrix_csv, write_matrix_csv, write_vector_csv
from .identity import cauchy_binet_f, det_weighted_solution, gram_determinant, verify_identity
from .instances import random_full_rank
from .montecarlo import McConfig, mc_solution
from .subsets import check_cap

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_RANK = 3
EXIT_CAP = 4

CHECK_NAMES = ("identity", "cauchy-binet", "lemmas")

log = logging.getLogger("lsid")


def _workers(args) -> int:
    if args.deterministic:
        return 1
    return args.workers or os.cpu_count() or 1


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _inf_norm(x) -> float:
    return float(np.max(np.abs(x)))


def run_solve(args) -> int:
    inst = read_instance(args.matrix, args.rhs)
    a, b = inst.a, inst.b
    tol = DEFAULT_TOLERANCES.num_tol if args.tol is None else args.tol
    start = time.perf_counter()
    report = Report(method=args.method, det_gram=gram_determinant(a))
    code = EXIT_OK

    if args.method == "pseudo":
        x = pseudo_inverse_solve(a, b)
    else:
        if args.method == "subset":
            result = det_weighted_solution(a, b, workers=_workers(args))
        else:
            cfg = McConfig(samples=args.samples, seed=args.seed, shards=args.shards)
            result = mc_solution(a, b, cfg)
            report.samples, report.seed = cfg.samples, cfg.seed
        x = result.solution
        report.subsets_total = result.subsets_total
        report.subsets_singular = result.subsets_singular
        x_ref = pseudo_inverse_solve(a, b)
        gap = _inf_norm(x - x_ref)
        report.extra["discrepancy"] = gap
        if args.method == "subset":
            ok = gap <= tol * (1.0 + _inf_norm(x_ref))
            report.extra["passed"] = ok
            if not ok:
                print(f"error: subset and pseudo-inverse routes disagree by {gap:.3e} "
                      f"(tolerance {tol:g})", file=sys.stderr)
                code = EXIT_FAILED

    report.solution = x.tolist()
    report.residual_l2 = float(np.linalg.norm(a @ x - b))
    report.elapsed_ms = (time.perf_counter() - start) * 1e3
    _emit(dumps_report(report), args.out)
    return code


def _lemma_checks(a: np.ndarray, fd_tol: float) -> list[dict]:
    m, n = a.shape
    checks = []
    if m == n:
        sq, note = a, "square input"
    else:
        sq, note = a.T @ a, "input is not square; Lemma 2/3 checks run on the Gram matrix A^t A"
        print(f"note: {note}", file=sys.stderr)
    d = sq.shape[0]

    for name, fn in (("lemma-inverse-derivative", calculus.check_inverse_derivative),
                     ("lemma-det-derivative", calculus.check_det_derivative)):
        results = [fn(sq, i, j, fd_tol=fd_tol) for i in range(1, d + 1) for j in range(1, d + 1)]
        worst = max(results, key=lambda r: r.max_rel_err)
        checks.append({
            "name": name,
            "passed": all(r.passed for r in results),
            "error": worst.max_rel_err,
            "tolerance": fd_tol,
            "worst_entry": list(worst.worst_entry),
            "note": note,
        })

    gram = a.T @ a
    tr = calculus.check_trace_symmetry(gram, a[:n, :])
    checks.append({"name": "lemma-trace-symmetry", "passed": tr.passed, "error": tr.max_rel_err,
                   "tolerance": DEFAULT_TOLERANCES.trace_tol, "worst_entry": None,
                   "note": "S = A^t A, M = leading n x n block of A"})
    checks.append({"name": "lemma-inner-product-separation",
                   "passed": calculus.check_inner_product_separation(a),
                   "error": None, "tolerance": None, "worst_entry": None})
    grad = calculus.check_identity_gradient(a)
    checks.append({"name": "gradient-of-f", "passed": grad.passed, "error": grad.max_rel_err,
                   "tolerance": DEFAULT_TOLERANCES.gradient_tol,
                   "worst_entry": list(grad.worst_entry)})
    return checks


def run_verify(args) -> int:
    a = read_matrix_csv(args.matrix)
    if a.shape[0] < a.shape[1]:
        raise DimensionMismatchError(f"need rows >= cols, got {a.shape}")
    selected = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = set(selected) - set(CHECK_NAMES)
    if unknown or not selected:
        raise InvalidRangeError(f"unknown checks {sorted(unknown)}; choose from {', '.join(CHECK_NAMES)}")
    tol = DEFAULT_TOLERANCES.num_tol if args.tol is None else args.tol
    start = time.perf_counter()
    report = Report(method="verify", det_gram=gram_determinant(a))
    m, n = a.shape
    report.subsets_total = check_cap(m, n)
    checks = []

    if "identity" in selected:
        ident = verify_identity(a, num_tol=tol, workers=_workers(args))
        report.max_identity_diff = ident.max_abs_diff
        checks.append({"name": "identity", "passed": ident.identity_ok, "error": ident.max_abs_diff,
                       "tolerance": tol, "worst_entry": _worst(ident.lhs - ident.rhs)})
    if "cauchy-binet" in selected:
        f = cauchy_binet_f(a)
        report.f_value = f
        checks.append({"name": "cauchy-binet", "passed": abs(f) <= tol * (1.0 + abs(report.det_gram)),
                       "error": abs(f), "tolerance": tol, "worst_entry": None})
    if "lemmas" in selected:
        checks.extend(_lemma_checks(a, args.fd_tol))

    passed = all(c["passed"] for c in checks)
    report.extra["passed"] = passed
    report.extra["checks"] = checks
    report.elapsed_ms = (time.perf_counter() - start) * 1e3
    for c in checks:
        if not c["passed"]:
            print(f"FAILED {c['name']}: error {c['error']} (tolerance {c['tolerance']}), "
                  f"worst entry {c.get('worst_entry')}", file=sys.stderr)
    _emit(dumps_report(report), args.out)
    return EXIT_OK if passed else EXIT_FAILED


def _worst(diff: np.ndarray) -> list[int]:
    i, j = np.unravel_index(int(np.argmax(np.abs(diff))), diff.shape)
    return [int(i) + 1, int(j) + 1]


BENCH_COLUMNS = ("m", "n", "trial", "route", "elapsed_ns", "discrepancy", "f_value")


def run_bench(args) -> int:
    if not 1 <= args.n <= args.m:
        raise InvalidRangeError(f"need 1 <= n <= m, got m={args.m}, n={args.n}")
    if args.trials < 1:
        raise InvalidRangeError("--trials must be >= 1")
    check_cap(args.m, args.n)
    rng = np.random.default_rng(args.seed)
    tol = 1e-8 if args.tol is None else args.tol
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    code = EXIT_OK
    for trial in range(args.trials):
        a = random_full_rank(rng, args.m, args.n)
        b = rng.uniform(-1, 1, size=args.m)
        if args.dump:
            Path(args.dump).mkdir(parents=True, exist_ok=True)
            write_matrix_csv(a, Path(args.dump) / f"A_{trial}.csv")
            write_vector_csv(b, Path(args.dump) / f"b_{trial}.csv")
        t0 = time.perf_counter_ns()
        x_pseudo = pseudo_inverse_solve(a, b)
        t1 = time.perf_counter_ns()
        x_subset = det_weighted_solution(a, b, workers=_workers(args)).solution
        t2 = time.perf_counter_ns()
        gap = _inf_norm(x_subset - x_pseudo)
        f = cauchy_binet_f(a)
        if gap > tol * (1.0 + _inf_norm(x_pseudo)):
            print(f"trial {trial}: routes disagree by {gap:.3e}", file=sys.stderr)
            code = EXIT_FAILED
        for route, ns in (("pseudo", t1 - t0), ("subset", t2 - t1)):
            writer.writerow([args.m, args.n, trial, route, max(ns, 1), "%.17g" % gap, "%.17g" % f])
    _emit(buf.getvalue(), args.out)
    return code


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--tol", type=float, default=None, help="numerical pass threshold")
    p.add_argument("--deterministic", action=argparse.BooleanOptionalAction, default=True,
                   help="sequential lexicographic accumulation (default on)")
    p.add_argument("--workers", type=int, default=None, help="threads when --no-deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lsid", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve an overdetermined system")
    solve.add_argument("--matrix", required=True)
    solve.add_argument("--rhs", required=True)
    solve.add_argument("--method", choices=("pseudo", "subset", "monte-carlo"), default="subset")
    solve.add_argument("--samples", type=int, default=None)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--shards", type=int, default=1)
    _add_common(solve)
    solve.set_defaults(func=run_solve)

    verify = sub.add_parser("verify", help="check the determinant identities and lemmas")
    verify.add_argument("--matrix", required=True)
    verify.add_argument("--rhs", help="accepted for symmetry with solve; unused")
    verify.add_argument("--checks", default=",".join(CHECK_NAMES))
    verify.add_argument("--fd-tol", type=float, default=DEFAULT_TOLERANCES.fd_tol)
    _add_common(verify)
    verify.set_defaults(func=run_verify)

    bench = sub.add_parser("bench", help="time both routes on random instances")
    bench.add_argument("--m", type=int, required=True)
    bench.add_argument("--n", type=int, required=True)
    bench.add_argument("--trials", type=int, default=5)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--dump", help="directory to write each instance as CSV")
    _add_common(bench)
    bench.set_defaults(func=run_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.command == "solve" and args.method == "monte-carlo" and (args.samples is None or args.samples < 1):
        parser.error("--method monte-carlo requires --samples >= 1")
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (RankDeficientError, SingularMatrixError, AllSampledSingularError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANK
    except (FormatError, OSError, DimensionMismatchError, NonFiniteError, InvalidRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
