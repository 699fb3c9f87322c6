"""Distribution of the Monte-Carlo median error over many master seeds.

For each master seed: draw 20 random 8x2 instances (entries and b uniform in
[-1, 1]), estimate with 10^2, 10^3, 10^4 uniform subset draws, and take the
median L-infinity error against exact enumeration. Prints quantiles of the
10^4 median, the fraction at or below 1e-2, and how often the three medians
are non-increasing.

    python scripts/mc_convergence.py --masters 40
"""

import argparse

import numpy as np

from lsid.identity import det_weighted_solution
from lsid.instances import random_full_rank
from lsid.montecarlo import McConfig, mc_solution

SIZES = (100, 1000, 10_000)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--masters", type=int, default=40)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--threshold", type=float, default=1e-2)
    args = ap.parse_args()

    final, monotone = [], 0
    for master in range(args.masters):
        rng = np.random.default_rng(master)
        errors = {s: [] for s in SIZES}
        for t in range(args.trials):
            a = random_full_rank(rng, 8, 2)
            b = rng.uniform(-1, 1, 8)
            exact = det_weighted_solution(a, b).solution
            for s in SIZES:
                est = mc_solution(a, b, McConfig(samples=s, seed=master * 1000 + t)).solution
                errors[s].append(np.max(np.abs(est - exact)))
        med = [np.median(errors[s]) for s in SIZES]
        final.append(med[-1])
        monotone += med[0] >= med[1] >= med[2]
        print(f"master {master:3d}: " + "  ".join(f"{s}:{v:.3e}" for s, v in zip(SIZES, med)))

    final = np.array(final)
    q = np.percentile(final, [0, 25, 50, 75, 100])
    print("10^4 median quantiles (min/25/50/75/max):", " ".join(f"{v:.3e}" for v in q))
    print(f"fraction <= {args.threshold:g}: {(final <= args.threshold).mean():.3f}")
    print(f"non-increasing medians: {monotone}/{args.masters}")


if __name__ == "__main__":
    main()
