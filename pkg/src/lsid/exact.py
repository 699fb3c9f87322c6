"""Exact rational arithmetic for oracle checks.

Everything here works on ``fractions.Fraction`` and plain lists, sharing no
code with the floating-point kernels, so it can stand as an independent
reference for them.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def to_fractions(a):
    """Convert a nested list or numpy array of numbers to Fractions."""
    if hasattr(a, "tolist"):
        a = a.tolist()
    if a and isinstance(a[0], (list, tuple)):
        return [[Fraction(x) for x in row] for row in a]
    return [Fraction(x) for x in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def det(a) -> Fraction:
    """Determinant by Gaussian elimination over the rationals."""
    a = [list(row) for row in a]
    d = len(a)
    result = Fraction(1)
    for k in range(d):
        pivot = next((r for r in range(k, d) if a[r][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            result = -result
        result *= a[k][k]
        for r in range(k + 1, d):
            factor = a[r][k] / a[k][k]
            if factor:
                for c in range(k, d):
                    a[r][c] -= factor * a[k][c]
    return result


def solve(a, b):
    """Gauss-Jordan solve of a non-singular square system; ZeroDivisionError if singular."""
    d = len(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    for k in range(d):
        pivot = next((r for r in range(k, d) if aug[r][k] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        aug[k], aug[pivot] = aug[pivot], aug[k]
        inv = 1 / aug[k][k]
        aug[k] = [x * inv for x in aug[k]]
        for r in range(d):
            if r != k and aug[r][k] != 0:
                factor = aug[r][k]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[k])]
    return [row[-1] for row in aug]


def least_squares(a, b):
    """(A^t A)^{-1} A^t b via the normal equations, exactly."""
    at = transpose(a)
    gram = matmul(at, a)
    rhs = [sum((x * y for x, y in zip(row, b)), Fraction(0)) for row in at]
    return solve(gram, rhs)


def det_weighted_average(a, b):
    """Brute force: sum det(A_p)^2 x_p / sum det(A_p)^2 over all row subsets."""
    m, n = len(a), len(a[0])
    num = [Fraction(0)] * n
    den = Fraction(0)
    for p in itertools.combinations(range(m), n):
        ap = [a[i] for i in p]
        d = det(ap)
        if d == 0:
            continue
        xp = solve(ap, [b[i] for i in p])
        w = d * d
        num = [s + w * x for s, x in zip(num, xp)]
        den += w
    if den == 0:
        raise ZeroDivisionError("all subsets singular")
    return [s / den for s in num]


def sum_det_squares(a) -> Fraction:
    m, n = len(a), len(a[0])
    return sum((det([a[i] for i in p]) ** 2 for p in itertools.combinations(range(m), n)), Fraction(0))


def gram_det(a) -> Fraction:
    return det(matmul(transpose(a), a))
