"""Random problem instances for tests, benchmarks and scripts."""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOLERANCES
from .dense import lu_decompose, pivot_ratio


def random_full_rank(rng: np.random.Generator, m: int, n: int, cond_max: float = 1e6,
                     low: float = -1.0, high: float = 1.0, max_tries: int = 1000) -> np.ndarray:
    """Uniform entries, resampled until cond(A^t A) <= cond_max."""
    for _ in range(max_tries):
        a = rng.uniform(low, high, size=(m, n))
        if np.linalg.cond(a.T @ a) <= cond_max:
            return a
    raise RuntimeError(f"no {m}x{n} draw with cond(A^t A) <= {cond_max} in {max_tries} tries")


def random_rank_deficient(rng: np.random.Generator, m: int, n: int, rank: int | None = None) -> np.ndarray:
    """An m x n matrix of rank ``rank`` (default n - 1) built as a product of thin factors."""
    r = n - 1 if rank is None else rank
    if r == 0:
        return np.zeros((m, n))
    return rng.uniform(-1, 1, size=(m, r)) @ rng.uniform(-1, 1, size=(r, n))


def well_conditioned_square(rng: np.random.Generator, d: int,
                            max_pivot_ratio: float = DEFAULT_TOLERANCES.max_pivot_ratio,
                            max_tries: int = 1000) -> np.ndarray:
    for _ in range(max_tries):
        a = rng.uniform(-1, 1, size=(d, d))
        if pivot_ratio(lu_decompose(a)) <= max_pivot_ratio:
            return a
    raise RuntimeError(f"no well-conditioned {d}x{d} draw in {max_tries} tries")


def random_integer_matrix(rng: np.random.Generator, m: int, n: int, low: int = -3, high: int = 3) -> np.ndarray:
    return rng.integers(low, high + 1, size=(m, n)).astype(float)
