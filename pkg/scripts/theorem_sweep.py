"""Sweep (m, n) and report the worst gap between the subset-average and QR routes.

    python scripts/theorem_sweep.py --trials 50 --seed 0
"""

import argparse

import numpy as np

from lsid.dense import pseudo_inverse_solve
from lsid.identity import cauchy_binet_f, det_weighted_solution, gram_determinant
from lsid.instances import random_full_rank


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-m", type=int, default=12)
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>2} {'m':>3} {'worst gap':>11} {'worst |f|/(1+det)':>18}")
    for n in range(1, args.max_n + 1):
        for m in range(n, args.max_m + 1):
            gap = cb = 0.0
            for _ in range(args.trials):
                a = random_full_rank(rng, m, n)
                b = rng.uniform(-1, 1, m)
                x_ls = pseudo_inverse_solve(a, b)
                x_sub = det_weighted_solution(a, b).solution
                gap = max(gap, np.max(np.abs(x_sub - x_ls)) / (1 + np.max(np.abs(x_ls))))
                cb = max(cb, abs(cauchy_binet_f(a)) / (1 + gram_determinant(a)))
            print(f"{n:>2} {m:>3} {gap:>11.2e} {cb:>18.2e}")


if __name__ == "__main__":
    main()
