"""Numerical tolerances and limits, collected in one frozen dataclass."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

CAP_ENV_VAR = "LSID_SUBSET_CAP"
DEFAULT_SUBSET_CAP = 10_000_000


def subset_cap_from_env() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_SUBSET_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{CAP_ENV_VAR} must be a positive integer, got {raw!r}")
    return cap


@dataclass(frozen=True)
class Tolerances:
    # LU pivot threshold, relative to the largest absolute entry
    pivot_rel: float = 1e-12
    # QR rank test: |R_ii| <= rank_tol * max |R_jj| means rank-deficient
    rank_tol: float = 1e-10
    solver_tol: float = 1e-10
    # identity / Cauchy-Binet pass threshold
    num_tol: float = 1e-9
    # finite-difference lemma checks
    fd_tol: float = 1e-5
    fd_rel_step: float = 1e-6
    trace_tol: float = 1e-12
    gradient_tol: float = 1e-6
    # lemma checks resample above this LU pivot ratio
    max_pivot_ratio: float = 1e8
    # scaled det^2 weights below this mean rank-deficient
    weight_floor: float = 1e-24


@dataclass(frozen=True)
class Config:
    tol: Tolerances = field(default_factory=Tolerances)
    subset_cap: int = field(default_factory=subset_cap_from_env)


DEFAULT_TOLERANCES = Tolerances()
