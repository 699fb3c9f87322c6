"""Forward error of three least-squares routes as cond(A) grows.

The reference is the exact rational least-squares solution of the
floating-point inputs, so every route is judged against the same truth.

    python scripts/conditioning.py --m 8 --n 3 --trials 10
"""

import argparse

import numpy as np

from lsid import exact
from lsid.dense import normal_equations_solve, pseudo_inverse_solve
from lsid.identity import det_weighted_solution


def graded_matrix(rng, m, n, cond):
    u, _ = np.linalg.qr(rng.normal(size=(m, n)))
    v, _ = np.linalg.qr(rng.normal(size=(n, n)))
    s = np.geomspace(1.0, 1.0 / cond, n)
    return (u * s) @ v.T


def _cell(values):
    finite = [v for v in values if not np.isnan(v)]
    return f"{np.median(finite):>10.2e}" if finite else f"{'singular':>10}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=8)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'cond(A)':>8} {'qr':>10} {'normal-eq':>10} {'subset':>10}")
    for cond in (1e0, 1e2, 1e4, 1e6, 1e8):
        errs = {"qr": [], "normal": [], "subset": []}
        for _ in range(args.trials):
            a = graded_matrix(rng, args.m, args.n, cond)
            b = rng.normal(size=args.m)
            ref = np.array([float(x) for x in exact.least_squares(exact.to_fractions(a), exact.to_fractions(b))])
            scale = np.max(np.abs(ref))
            for name, fn in (("qr", pseudo_inverse_solve), ("normal", normal_equations_solve),
                             ("subset", lambda a, b: det_weighted_solution(a, b).solution)):
                try:
                    errs[name].append(np.max(np.abs(fn(a, b) - ref)) / scale)
                except ArithmeticError:
                    errs[name].append(np.nan)
        row = " ".join(_cell(errs[k]) for k in ("qr", "normal", "subset"))
        print(f"{cond:>8.0e} {row}")


if __name__ == "__main__":
    main()
