"""Row subsets of an overdetermined system and the column-embedding operator.

Subset indices are 1-based, matching the ``[m] = {1, ..., m}`` convention
used in reports; ``SubsetIndex.rows`` gives the 0-based positions for
numpy indexing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .config import DEFAULT_TOLERANCES, subset_cap_from_env
from .dense import as_mat, as_vec, lu_decompose, lu_solve
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidRangeError,
)

__all__ = [
    "SubsetIndex",
    "SubsetSolution",
    "check_cap",
    "combinations",
    "embb",
    "extract_entries",
    "extract_rows",
    "subset_solution",
]


@dataclass(frozen=True)
class SubsetIndex:
    indices: tuple[int, ...]
    m: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if not idx:
            raise InvalidRangeError("subset must be non-empty")
        if len(idx) > self.m:
            raise InvalidRangeError(f"subset of size {len(idx)} exceeds m={self.m}")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise InvalidRangeError(f"subset indices must be strictly increasing: {idx}")
        if idx[0] < 1 or idx[-1] > self.m:
            raise IndexOutOfRangeError(f"subset {idx} not within [1..{self.m}]")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def rows(self) -> list[int]:
        return [i - 1 for i in self.indices]


@dataclass(frozen=True)
class SubsetSolution:
    subset: SubsetIndex
    det_ap: float
    x_p: np.ndarray | None

    @property
    def singular(self) -> bool:
        return self.x_p is None


def check_cap(m: int, n: int, cap: int | None = None) -> int:
    """Return C(m, n), raising CapExceededError if it is above the cap."""
    if cap is None:
        cap = subset_cap_from_env()
    total = math.comb(m, n)
    if total > cap:
        raise CapExceededError(
            f"C({m},{n}) = {total} subsets exceeds the enumeration cap {cap}; "
            "use the monte-carlo method instead"
        )
    return total


def combinations(m: int, n: int) -> Iterator[SubsetIndex]:
    """All n-subsets of [1..m] in lexicographic order."""
    if n < 1 or n > m:
        raise InvalidRangeError(f"need 1 <= n <= m, got m={m}, n={n}")
    for c in itertools.combinations(range(1, m + 1), n):
        yield SubsetIndex(c, m)


def _check_range(p: SubsetIndex, size: int) -> None:
    if p.m != size or p.indices[-1] > size:
        raise IndexOutOfRangeError(f"subset over [1..{p.m}] does not fit length {size}")


def extract_rows(a, p: SubsetIndex) -> np.ndarray:
    a = as_mat(a)
    _check_range(p, a.shape[0])
    return a[p.rows]


def extract_entries(b, p: SubsetIndex) -> np.ndarray:
    b = as_vec(b)
    _check_range(p, b.size)
    return b[p.rows]


def subset_solution(a, b, p: SubsetIndex, pivot_rel: float = DEFAULT_TOLERANCES.pivot_rel) -> SubsetSolution:
    """Solve the square subsystem on rows ``p``.

    Singular subsystems are not an error: they come back with ``det_ap = 0``
    and no solution, and carry zero weight in every average built on them.
    """
    a, b = as_mat(a), as_vec(b)
    if a.shape[0] != b.size:
        raise DimensionMismatchError(f"A has {a.shape[0]} rows, b has length {b.size}")
    if len(p) != a.shape[1]:
        raise DimensionMismatchError(f"subset size {len(p)} != column count {a.shape[1]}")
    _check_range(p, a.shape[0])
    rows = p.rows
    f = lu_decompose(a[rows], pivot_rel)
    if f.singular:
        return SubsetSolution(p, 0.0, None)
    return SubsetSolution(p, f.det(), lu_solve(f, b[rows]))


def embb(block, p: SubsetIndex, m: int) -> np.ndarray:
    """Place the columns of an n x n block at columns ``p`` of an n x m zero matrix."""
    block = as_mat(block)
    n = block.shape[0]
    if block.shape[1] != n:
        raise DimensionMismatchError(f"block must be square, got {block.shape}")
    if len(p) != n or p.m != m:
        raise DimensionMismatchError(
            f"subset of size {len(p)} over [1..{p.m}] does not match n={n}, m={m}"
        )
    out = np.zeros((n, m))
    out[:, p.rows] = block
    return out
