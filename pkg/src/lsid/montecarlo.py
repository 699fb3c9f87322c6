"""Sampled estimate of the det^2-weighted subset average.

Subsets are drawn uniformly and the estimate is the self-normalized ratio
``sum det(A_p)^2 x_p / sum det(A_p)^2`` over the draws. Singular draws add
zero to both sums.

The generator is SplitMix64 (64-bit state, golden-gamma increment
0x9E3779B97F4A7C15, output mixers 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB).
Bounded integers in [0, k) use rejection: draw r until
``r < 2**64 - (2**64 % k)``, then return ``r % k``. Subsets are drawn with
Floyd's algorithm: for ``j = m-n+1 .. m`` pick ``t`` uniform in [1, j];
insert ``t`` unless already chosen, else insert ``j``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .dense import as_mat, as_vec, lu_decompose, lu_solve, qr_rank_check
from .errors import AllSampledSingularError, DimensionMismatchError, InvalidRangeError
from .identity import WeightedSolveResult
from .subsets import SubsetIndex
from .summation import KahanSum

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        if k < 1:
            raise InvalidRangeError(f"bound must be positive, got {k}")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % k


@dataclass(frozen=True)
class McConfig:
    samples: int
    seed: int = 0
    # log progress every report_stride draws; 0 disables
    report_stride: int = 0
    # independent streams seeded seed, seed+1, ...; merged in shard order
    shards: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise InvalidRangeError(f"samples must be >= 1, got {self.samples}")
        if self.shards < 1:
            raise InvalidRangeError(f"shards must be >= 1, got {self.shards}")
        if not 0 <= self.seed <= MASK64:
            raise InvalidRangeError("seed must be a 64-bit unsigned integer")


def sample_subset(m: int, n: int, rng: SplitMix64) -> SubsetIndex:
    if n < 1 or n > m:
        raise InvalidRangeError(f"need 1 <= n <= m, got m={m}, n={n}")
    chosen: set[int] = set()
    for j in range(m - n + 1, m + 1):
        t = 1 + rng.below(j)
        chosen.add(j if t in chosen else t)
    return SubsetIndex(tuple(sorted(chosen)), m)


def _draw(a, b, count: int, seed: int, stride: int, pivot_rel: float):
    m, n = a.shape
    rng = SplitMix64(seed)
    cache: dict[tuple[int, ...], tuple[float, np.ndarray | None]] = {}
    draws = []
    for k in range(count):
        p = sample_subset(m, n, rng)
        hit = cache.get(p.indices)
        if hit is None:
            f = lu_decompose(a[p.rows], pivot_rel)
            hit = (0.0, None) if f.singular else (f.det(), lu_solve(f, b[p.rows]))
            cache[p.indices] = hit
        draws.append(hit)
        if stride and (k + 1) % stride == 0:
            log.info("seed %d: %d/%d draws", seed, k + 1, count)
    return draws


def mc_solution(a, b, cfg: McConfig, *, pivot_rel: float = DEFAULT_TOLERANCES.pivot_rel) -> WeightedSolveResult:
    a, b = as_mat(a), as_vec(b)
    if a.shape[0] != b.size:
        raise DimensionMismatchError(f"A has {a.shape[0]} rows, b has length {b.size}")
    qr_rank_check(a)
    n = a.shape[1]

    base, extra = divmod(cfg.samples, cfg.shards)
    counts = [base + (k < extra) for k in range(cfg.shards)]
    jobs = [(c, cfg.seed + k) for k, c in enumerate(counts) if c > 0]
    if len(jobs) == 1:
        parts = [_draw(a, b, jobs[0][0], jobs[0][1], cfg.report_stride, pivot_rel)]
    else:
        with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
            parts = list(pool.map(
                lambda job: _draw(a, b, job[0], job[1] & MASK64, cfg.report_stride, pivot_rel), jobs))
    draws = [d for part in parts for d in part]

    singular = sum(x is None for _, x in draws)
    s = max(abs(det) for det, _ in draws)
    if s == 0.0:
        raise AllSampledSingularError(
            f"all {len(draws)} sampled subsystems were singular; "
            "draw more samples or use the exact subset route"
        )
    num, den = KahanSum(n), KahanSum()
    for det, x in draws:
        if x is None:
            continue
        w = (det / s) ** 2
        num.add(w * x)
        den.add(w)
    return WeightedSolveResult(num.value / den.value, den.value, len(draws), singular, s)
