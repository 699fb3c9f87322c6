"""Compensated (Kahan) summation over scalars and numpy arrays."""

from __future__ import annotations

import numpy as np


class KahanSum:
    """Elementwise Kahan accumulator.

    Terms must be added in a fixed order for bit-reproducible totals. Two
    accumulators built over disjoint contiguous ranges can be merged with
    :meth:`merge`; merging in range order keeps the result deterministic,
    though not bit-equal to a single sequential pass.
    """

    def __init__(self, shape=()):
        self.total = np.zeros(shape, dtype=float)
        self._comp = np.zeros(shape, dtype=float)

    def add(self, term) -> None:
        y = term - self._comp
        t = self.total + y
        self._comp = (t - self.total) - y
        self.total = t

    def merge(self, other: "KahanSum") -> None:
        self.add(other.total)
        self.add(-other._comp)

    @property
    def value(self):
        if self.total.ndim == 0:
            return float(self.total)
        return self.total.copy()


def kahan_sum(terms, shape=()):
    acc = KahanSum(shape)
    for t in terms:
        acc.add(t)
    return acc.value
