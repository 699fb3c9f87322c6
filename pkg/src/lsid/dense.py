"""Dense matrix and vector kernels.

Matrices and vectors are plain float64 numpy arrays (2-D and 1-D). The
``as_mat`` / ``as_vec`` constructors enforce the shape and finiteness
invariants; every public kernel routes its inputs through them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import (
    DimensionMismatchError,
    NonFiniteError,
    NonSquareError,
    RankDeficientError,
    SingularMatrixError,
)

__all__ = [
    "LuFactors",
    "as_mat",
    "as_vec",
    "det",
    "frobenius_inner",
    "invert_square",
    "lu_decompose",
    "lu_solve",
    "matmul",
    "normal_equations_solve",
    "pivot_ratio",
    "pseudo_inverse_solve",
    "qr_rank_check",
    "solve_square",
    "transpose",
]


def as_mat(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatchError(f"matrix dimensions must be positive, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("matrix has NaN or infinite entries")
    return a


def as_vec(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim == 2 and 1 in v.shape:
        v = v.reshape(-1)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got shape {v.shape}")
    if v.size < 1:
        raise DimensionMismatchError("vector must be non-empty")
    if not np.all(np.isfinite(v)):
        raise NonFiniteError("vector has NaN or infinite entries")
    return v


def _as_square(x) -> np.ndarray:
    a = as_mat(x)
    if a.shape[0] != a.shape[1]:
        raise NonSquareError(f"expected a square matrix, got {a.shape}")
    return a


def matmul(a, b) -> np.ndarray:
    a, b = as_mat(a), as_mat(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def transpose(a) -> np.ndarray:
    return as_mat(a).T.copy()


@dataclass(frozen=True)
class LuFactors:
    """Packed ``PA = LU`` factors.

    ``lu`` holds the unit-lower multipliers below the diagonal and U on and
    above it. ``perm[k]`` is the original row that ended up in position k.
    """

    lu: np.ndarray
    perm: tuple[int, ...]
    sign: int
    singular: bool

    @property
    def size(self) -> int:
        return self.lu.shape[0]

    @property
    def u_diagonal(self) -> np.ndarray:
        return np.diag(self.lu).copy()

    def det(self) -> float:
        if self.singular:
            return 0.0
        return float(self.sign * np.prod(np.diag(self.lu)))


def lu_decompose(m, pivot_rel: float = DEFAULT_TOLERANCES.pivot_rel) -> LuFactors:
    """LU with partial pivoting.

    A pivot counts as zero when its magnitude is below
    ``pivot_rel * max|m_ij|``; elimination then skips that column and the
    factors are flagged singular.
    """
    a = _as_square(m).copy()
    d = a.shape[0]
    tol = pivot_rel * float(np.max(np.abs(a)))
    perm = list(range(d))
    sign = 1
    singular = False
    for k in range(d):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[k], perm[p] = perm[p], perm[k]
            sign = -sign
        pivot = a[k, k]
        if pivot == 0.0 or abs(pivot) < tol:
            singular = True
            continue
        if k + 1 < d:
            a[k + 1:, k] /= pivot
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return LuFactors(lu=a, perm=tuple(perm), sign=sign, singular=singular)


def pivot_ratio(f: LuFactors) -> float:
    """max|U_ii| / min|U_ii|; infinite for singular factors."""
    diag = np.abs(np.diag(f.lu))
    if f.singular or diag.min() == 0.0:
        return float("inf")
    return float(diag.max() / diag.min())


def lu_solve(f: LuFactors, rhs) -> np.ndarray:
    """Solve with existing factors; ``rhs`` may be a vector or a matrix of columns."""
    if f.singular:
        raise SingularMatrixError("matrix is singular to working precision")
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != f.size:
        raise DimensionMismatchError(
            f"right-hand side has {rhs.shape[0]} rows, matrix has {f.size}"
        )
    lu = f.lu
    d = f.size
    y = rhs[list(f.perm)].copy()
    for k in range(d):
        y[k] -= lu[k, :k] @ y[:k]
    for k in range(d - 1, -1, -1):
        y[k] = (y[k] - lu[k, k + 1:] @ y[k + 1:]) / lu[k, k]
    return y


def det(m) -> float:
    return lu_decompose(m).det()


def solve_square(m, v) -> np.ndarray:
    a = _as_square(m)
    v = as_vec(v)
    if a.shape[0] != v.size:
        raise DimensionMismatchError(f"matrix is {a.shape}, vector has length {v.size}")
    return lu_solve(lu_decompose(a), v)


def invert_square(m) -> np.ndarray:
    a = _as_square(m)
    return lu_solve(lu_decompose(a), np.eye(a.shape[0]))


def qr_rank_check(a, rank_tol: float = DEFAULT_TOLERANCES.rank_tol):
    """Reduced QR of a tall matrix; raises if any |R_ii| <= rank_tol * max|R_jj|."""
    a = as_mat(a)
    m, n = a.shape
    if m < n:
        raise DimensionMismatchError(f"need rows >= cols, got {a.shape}")
    q, r = np.linalg.qr(a, mode="reduced")
    diag = np.abs(np.diag(r))
    top = diag.max()
    if top == 0.0 or np.any(diag <= rank_tol * top):
        raise RankDeficientError(
            f"matrix is rank-deficient (min/max |R_ii| = {diag.min() / top if top else 0.0:.3g})"
        )
    return q, r


def _back_substitute(r: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = r.shape[0]
    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (y[k] - r[k, k + 1:] @ x[k + 1:]) / r[k, k]
    return x


def pseudo_inverse_solve(a, b, rank_tol: float = DEFAULT_TOLERANCES.rank_tol) -> np.ndarray:
    """Least-squares solution ``(A^t A)^{-1} A^t b`` computed through Householder QR."""
    a, b = as_mat(a), as_vec(b)
    if a.shape[0] != b.size:
        raise DimensionMismatchError(f"A has {a.shape[0]} rows, b has length {b.size}")
    q, r = qr_rank_check(a, rank_tol)
    return _back_substitute(r, q.T @ b)


def normal_equations_solve(a, b) -> np.ndarray:
    """The literal normal-equations route, ``solve(A^t A, A^t b)``."""
    a, b = as_mat(a), as_vec(b)
    if a.shape[0] != b.size:
        raise DimensionMismatchError(f"A has {a.shape[0]} rows, b has length {b.size}")
    f = lu_decompose(a.T @ a)
    if f.singular:
        raise RankDeficientError("Gram matrix A^t A is singular")
    return lu_solve(f, a.T @ b)


def frobenius_inner(m, n) -> float:
    m, n = as_mat(m), as_mat(n)
    if m.shape != n.shape:
        raise DimensionMismatchError(f"shapes differ: {m.shape} vs {n.shape}")
    return float(np.sum(m * n))
