"""Least squares as a determinant-weighted average of square subsystem solutions."""

from .calculus import (
    BasisMatrix,
    FdCheckResult,
    check_det_derivative,
    check_identity_gradient,
    check_inner_product_separation,
    check_inverse_derivative,
    check_trace_symmetry,
)
from .config import Config, Tolerances
from .dense import (
    LuFactors,
    det,
    frobenius_inner,
    invert_square,
    lu_decompose,
    matmul,
    normal_equations_solve,
    pseudo_inverse_solve,
    solve_square,
    transpose,
)
from .errors import *  # noqa: F401,F403
from .identity import (
    IdentityReport,
    WeightedSolveResult,
    cauchy_binet_f,
    det_weighted_solution,
    general_weighted_solution,
    identity_lhs,
    identity_rhs,
    verify_identity,
)
from .montecarlo import McConfig, SplitMix64, mc_solution, sample_subset
from .subsets import (
    SubsetIndex,
    SubsetSolution,
    combinations,
    embb,
    extract_entries,
    extract_rows,
    subset_solution,
)

__version__ = "0.1.0"
