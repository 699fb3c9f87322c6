"""Finite-difference and algebraic checks of the matrix-calculus lemmas.

All indices ``(i, j)`` are 1-based. Derivatives are taken with respect to a
single entry ``u = A_ij``, so ``dA/du`` is the unit basis matrix ``U_ij``.
Finite differences are central with step ``h = fd_rel_step * (1 + |A_ij|)``.

Relative errors use a unit floor, ``|fd - exact| / (1 + |exact|)``, so that
entries whose exact derivative is zero are still judged meaningfully.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .dense import _as_square, as_mat, frobenius_inner, lu_decompose, lu_solve
from .errors import IndexOutOfRangeError, NonSymmetricError, SingularMatrixError
from .identity import cauchy_binet_f, gram_determinant
from .subsets import check_cap

__all__ = [
    "BasisMatrix",
    "FdCheckResult",
    "check_det_derivative",
    "check_identity_gradient",
    "check_inner_product_separation",
    "check_inverse_derivative",
    "check_trace_symmetry",
]

TOL = DEFAULT_TOLERANCES


@dataclass(frozen=True)
class BasisMatrix:
    rows: int
    cols: int
    i: int
    j: int

    def __post_init__(self):
        if not (1 <= self.i <= self.rows and 1 <= self.j <= self.cols):
            raise IndexOutOfRangeError(
                f"({self.i},{self.j}) outside a {self.rows}x{self.cols} matrix"
            )

    def to_array(self) -> np.ndarray:
        u = np.zeros((self.rows, self.cols))
        u[self.i - 1, self.j - 1] = 1.0
        return u

    @classmethod
    def all(cls, rows: int, cols: int):
        return [cls(rows, cols, i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]


@dataclass(frozen=True)
class FdCheckResult:
    max_rel_err: float
    worst_entry: tuple[int, int] | None
    step: float
    passed: bool


def _step(a: np.ndarray, i: int, j: int, rel: float) -> float:
    return rel * (1.0 + abs(a[i - 1, j - 1]))


def _perturbed(a: np.ndarray, i: int, j: int, delta: float) -> np.ndarray:
    out = a.copy()
    out[i - 1, j - 1] += delta
    return out


def _nonsingular_factors(a: np.ndarray):
    f = lu_decompose(a)
    if f.singular:
        raise SingularMatrixError("lemma check needs a non-singular matrix")
    return f


def check_det_derivative(a, i: int, j: int, *, fd_tol: float = TOL.fd_tol,
                         fd_rel_step: float = TOL.fd_rel_step) -> FdCheckResult:
    """d det(A) / dA_ij against det(A) (A^{-1})_ji."""
    a = _as_square(a)
    d = a.shape[0]
    BasisMatrix(d, d, i, j)
    f = _nonsingular_factors(a)
    inv = lu_solve(f, np.eye(d))
    exact = f.det() * inv[j - 1, i - 1]
    h = _step(a, i, j, fd_rel_step)
    fd = (lu_decompose(_perturbed(a, i, j, h)).det()
          - lu_decompose(_perturbed(a, i, j, -h)).det()) / (2 * h)
    err = abs(fd - exact) / (1.0 + abs(exact))
    return FdCheckResult(err, (i, j), h, err <= fd_tol)


def _inverse(a: np.ndarray) -> np.ndarray:
    return lu_solve(_nonsingular_factors(a), np.eye(a.shape[0]))


def check_inverse_derivative(a, i: int, j: int, *, fd_tol: float = TOL.fd_tol,
                             fd_rel_step: float = TOL.fd_rel_step) -> FdCheckResult:
    """d A^{-1} / dA_ij against -A^{-1} U_ij A^{-1}, compared entrywise.

    ``worst_entry`` is the entry of the derivative matrix with the largest error.
    """
    a = _as_square(a)
    d = a.shape[0]
    u = BasisMatrix(d, d, i, j).to_array()
    inv = _inverse(a)
    exact = -inv @ u @ inv
    h = _step(a, i, j, fd_rel_step)
    fd = (_inverse(_perturbed(a, i, j, h)) - _inverse(_perturbed(a, i, j, -h))) / (2 * h)
    errs = np.abs(fd - exact) / (1.0 + np.abs(exact))
    k, l = np.unravel_index(int(np.argmax(errs)), errs.shape)
    err = float(errs[k, l])
    return FdCheckResult(err, (int(k) + 1, int(l) + 1), h, err <= fd_tol)


def check_trace_symmetry(s, m, *, tol: float = TOL.trace_tol, sym_tol: float = 1e-12) -> FdCheckResult:
    """tr(S M) == tr(S M^t) for symmetric S."""
    s, m = _as_square(s), _as_square(m)
    if s.shape != m.shape:
        raise ValueError(f"S is {s.shape} but M is {m.shape}")
    if np.max(np.abs(s - s.T)) > sym_tol:
        raise NonSymmetricError("S must be symmetric")
    t1 = float(np.trace(s @ m))
    t2 = float(np.trace(s @ m.T))
    err = abs(t1 - t2) / (1.0 + abs(t1))
    return FdCheckResult(err, None, 0.0, err <= tol)


def check_inner_product_separation(m) -> bool:
    """Rebuild M from its inner products with every basis matrix.

    True when the rebuild is exact and "all inner products vanish" implies
    M is zero.
    """
    m = as_mat(m)
    rows, cols = m.shape
    recon = np.zeros_like(m)
    for u in BasisMatrix.all(rows, cols):
        recon[u.i - 1, u.j - 1] = frobenius_inner(m, u.to_array())
    all_vanish = not np.any(recon)
    return bool(np.array_equal(recon, m)) and (not all_vanish or not np.any(m))


def check_identity_gradient(a, *, tol: float = TOL.gradient_tol,
                            fd_rel_step: float = TOL.fd_rel_step,
                            cap: int | None = None) -> FdCheckResult:
    """Central FD of f(A) = det(A^t A) - sum det(A_p)^2 at every entry.

    f vanishes identically, so every partial derivative must too; the error
    is |df/dA_ij| / (1 + det(A^t A)).
    """
    a = as_mat(a)
    m, n = a.shape
    check_cap(m, n, cap)
    scale = 1.0 + abs(gram_determinant(a))
    worst, worst_entry, worst_h = -1.0, None, 0.0
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            h = _step(a, i, j, fd_rel_step)
            grad = (cauchy_binet_f(_perturbed(a, i, j, h), cap=cap)
                    - cauchy_binet_f(_perturbed(a, i, j, -h), cap=cap)) / (2 * h)
            err = abs(grad) / scale
            if err > worst:
                worst, worst_entry, worst_h = err, (i, j), h
    return FdCheckResult(worst, worst_entry, worst_h, worst <= tol)
