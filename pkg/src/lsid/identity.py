"""Subset-averaged least squares and the determinant identities behind it.

For a full-column-rank ``A`` (m x n, m >= n) the average of all square
subsystem solutions ``x_p = A_p^{-1} b_p`` weighted by ``det(A_p)^2`` is the
least-squares solution. Equivalently, as n x m matrices,

    det(A^t A) (A^t A)^{-1} A^t == sum_p det(A_p)^2 embb(A_p^{-1}, p, m)

and ``det(A^t A) == sum_p det(A_p)^2`` (Cauchy-Binet with B = A).

Sums over subsets run in lexicographic order with Kahan compensation. With
``workers > 1`` the subsets are split into contiguous chunks evaluated on a
thread pool and merged in chunk order; that output agrees with the
sequential one to about 1e-10 relative but is not bit-identical.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import DEFAULT_TOLERANCES
from .dense import as_mat, as_vec, lu_decompose, lu_solve, qr_rank_check
from .errors import (
    AllWeightsZeroError,
    DimensionMismatchError,
    RankDeficientError,
)
from .subsets import SubsetIndex, SubsetSolution, check_cap, combinations, embb
from .summation import KahanSum

__all__ = [
    "IdentityReport",
    "WeightedSolveResult",
    "cauchy_binet_f",
    "det_weighted_solution",
    "general_weighted_solution",
    "gram_determinant",
    "identity_lhs",
    "identity_rhs",
    "verify_identity",
]


@dataclass(frozen=True)
class WeightedSolveResult:
    solution: np.ndarray
    # sum of the working weights; for the det^2 route these are (det/s)^2
    weight_sum: float
    subsets_total: int
    subsets_singular: int
    # s = max |det(A_p)|, the normalization scale of the det^2 weights
    max_scaled_det: float


@dataclass(frozen=True)
class IdentityReport:
    lhs: np.ndarray
    rhs: np.ndarray
    max_abs_diff: float
    cb_lhs: float
    cb_rhs: float
    f_value: float
    num_tol: float

    @property
    def identity_ok(self) -> bool:
        scale = 1.0 + float(np.max(np.abs(self.lhs)))
        return self.max_abs_diff <= self.num_tol * scale

    @property
    def cauchy_binet_ok(self) -> bool:
        return abs(self.f_value) <= self.num_tol * (1.0 + abs(self.cb_lhs))

    @property
    def passed(self) -> bool:
        return self.identity_ok and self.cauchy_binet_ok


def _tall(a) -> np.ndarray:
    a = as_mat(a)
    if a.shape[0] < a.shape[1]:
        raise DimensionMismatchError(f"need rows >= cols, got {a.shape}")
    return a


def _system(a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = _tall(a), as_vec(b)
    if a.shape[0] != b.size:
        raise DimensionMismatchError(f"A has {a.shape[0]} rows, b has length {b.size}")
    return a, b


def _chunks(items: list, workers: int) -> list[list]:
    if workers <= 1 or len(items) < 2 * workers:
        return [items]
    size = math.ceil(len(items) / workers)
    return [items[i:i + size] for i in range(0, len(items), size)]


def _map_chunks(fn, items: list, workers: int) -> list:
    chunks = _chunks(items, workers)
    if len(chunks) == 1:
        return [fn(chunks[0])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def _solve_all(a, b, subsets: list[SubsetIndex], pivot_rel: float, workers: int) -> list[SubsetSolution]:
    # inputs already validated; skip per-subset re-validation
    def run(chunk):
        out = []
        for p in chunk:
            rows = p.rows
            f = lu_decompose(a[rows], pivot_rel)
            if f.singular:
                out.append(SubsetSolution(p, 0.0, None))
            else:
                out.append(SubsetSolution(p, f.det(), lu_solve(f, b[rows])))
        return out

    solved = []
    for part in _map_chunks(run, subsets, workers):
        solved.extend(part)
    return solved


def _weighted_sum(solutions: list[SubsetSolution], weights: list[float], n: int, workers: int):
    pairs = [(s.x_p, w) for s, w in zip(solutions, weights) if s.x_p is not None and w > 0.0]

    def run(chunk):
        num, den = KahanSum(n), KahanSum()
        for x, w in chunk:
            num.add(w * x)
            den.add(w)
        return num, den

    num, den = KahanSum(n), KahanSum()
    for part_num, part_den in _map_chunks(run, pairs, workers):
        num.merge(part_num)
        den.merge(part_den)
    return num.value, den.value


def general_weighted_solution(
    a,
    b,
    weights: Callable[[SubsetIndex], float],
    *,
    cap: int | None = None,
    workers: int = 1,
    pivot_rel: float = DEFAULT_TOLERANCES.pivot_rel,
) -> WeightedSolveResult:
    """Weighted average ``sum w_p x_p / sum w_p`` of the subset solutions.

    ``weights`` maps each subset to a non-negative weight. Singular subsets
    have no solution and are left out whatever weight they are given.
    """
    a, b = _system(a, b)
    m, n = a.shape
    total = check_cap(m, n, cap)
    subsets = list(combinations(m, n))
    solutions = _solve_all(a, b, subsets, pivot_rel, workers)
    singular = sum(s.singular for s in solutions)
    if singular == total:
        raise RankDeficientError("every square subsystem is singular; A is rank-deficient")
    ws = []
    for s in solutions:
        w = float(weights(s.subset))
        if not np.isfinite(w) or w < 0.0:
            raise ValueError(f"weight for subset {s.subset.indices} must be finite and >= 0, got {w}")
        ws.append(w)
    num, den = _weighted_sum(solutions, ws, n, workers)
    if den <= 0.0:
        raise AllWeightsZeroError("all weights on non-singular subsets are zero")
    scale = max(abs(s.det_ap) for s in solutions)
    return WeightedSolveResult(num / den, den, total, singular, scale)


def det_weighted_solution(
    a,
    b,
    *,
    cap: int | None = None,
    workers: int = 1,
    pivot_rel: float = DEFAULT_TOLERANCES.pivot_rel,
    weight_floor: float = DEFAULT_TOLERANCES.weight_floor,
) -> WeightedSolveResult:
    """Average of subset solutions weighted by ``det(A_p)^2``.

    Determinants are gathered first and the weights rescaled to
    ``(det(A_p)/s)^2`` with ``s = max|det(A_p)|``, which avoids overflow
    without changing the ratio.

    Rank deficiency is reported when no subset is non-singular, or when even
    the largest determinant is negligible against the natural scale
    ``max|A|^n`` (scaled weight below ``weight_floor``).
    """
    a, b = _system(a, b)
    m, n = a.shape
    total = check_cap(m, n, cap)
    subsets = list(combinations(m, n))
    solutions = _solve_all(a, b, subsets, pivot_rel, workers)
    singular = sum(s.singular for s in solutions)
    s = max(abs(sol.det_ap) for sol in solutions)
    natural = float(np.max(np.abs(a))) ** n
    if singular == total or s == 0.0 or (s / natural) ** 2 < weight_floor:
        raise RankDeficientError("det^2 weights vanish; A is rank-deficient")
    weights = [(sol.det_ap / s) ** 2 for sol in solutions]
    num, den = _weighted_sum(solutions, weights, n, workers)
    return WeightedSolveResult(num / den, den, total, singular, s)


def gram_determinant(a) -> float:
    """det(A^t A) by LU; exactly 0 when the Gram matrix is numerically singular."""
    a = as_mat(a)
    return lu_decompose(a.T @ a).det()


def identity_lhs(a, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> np.ndarray:
    """det(A^t A) (A^t A)^{-1} A^t."""
    a = _tall(a)
    qr_rank_check(a, rank_tol)
    f = lu_decompose(a.T @ a)
    if f.singular:
        raise RankDeficientError("Gram matrix A^t A is singular")
    return f.det() * lu_solve(f, a.T)


def identity_rhs(
    a,
    *,
    cap: int | None = None,
    workers: int = 1,
    pivot_rel: float = DEFAULT_TOLERANCES.pivot_rel,
) -> np.ndarray:
    """sum over subsets of det(A_p)^2 embb(A_p^{-1}, p, m); singular subsets add nothing."""
    a = _tall(a)
    m, n = a.shape
    check_cap(m, n, cap)
    subsets = list(combinations(m, n))
    eye = np.eye(n)

    def run(chunk):
        acc = KahanSum((n, m))
        for p in chunk:
            f = lu_decompose(a[p.rows], pivot_rel)
            if f.singular:
                continue
            acc.add(f.det() ** 2 * embb(lu_solve(f, eye), p, m))
        return acc

    acc = KahanSum((n, m))
    for part in _map_chunks(run, subsets, workers):
        acc.merge(part)
    return acc.value


def _sum_det_squares(a, pivot_rel: float) -> float:
    m, n = a.shape
    acc = KahanSum()
    for p in combinations(m, n):
        acc.add(lu_decompose(a[p.rows], pivot_rel).det() ** 2)
    return acc.value


def cauchy_binet_f(a, *, cap: int | None = None, pivot_rel: float = DEFAULT_TOLERANCES.pivot_rel) -> float:
    """f(A) = det(A^t A) - sum_p det(A_p)^2, identically zero; full rank not required."""
    a = _tall(a)
    check_cap(*a.shape, cap)
    return gram_determinant(a) - _sum_det_squares(a, pivot_rel)


def verify_identity(
    a,
    *,
    num_tol: float = DEFAULT_TOLERANCES.num_tol,
    cap: int | None = None,
    workers: int = 1,
) -> IdentityReport:
    a = _tall(a)
    check_cap(*a.shape, cap)
    lhs = identity_lhs(a)
    rhs = identity_rhs(a, cap=cap, workers=workers)
    cb_lhs = gram_determinant(a)
    cb_rhs = _sum_det_squares(a, DEFAULT_TOLERANCES.pivot_rel)
    return IdentityReport(
        lhs=lhs,
        rhs=rhs,
        max_abs_diff=float(np.max(np.abs(lhs - rhs))),
        cb_lhs=cb_lhs,
        cb_rhs=cb_rhs,
        f_value=cb_lhs - cb_rhs,
        num_tol=num_tol,
    )
