"""Exact sumset counting and local verification for the hypercube set ``P_n``.

``P_n`` is the set of 0/1 combinations of the weights ``1, 3, 9, ..., 3**(n-1)``.
Every ``k``-subset should span at least ``k**log2(3)`` distinct differences;
this package counts differences exactly, searches subsets for the worst case,
replays the recursive decomposition behind that bound and certifies the
analytic inequalities it relies on with outward-rounded interval arithmetic.
"""

from .construction import build_baseline, build_pn, build_truncated, mian_chowla
from .core import (
    CoefficientVector,
    DifferenceVector,
    DimensionError,
    IntegerSet,
    PointSet,
    PolicyOverflowError,
    PowerSum,
    SubsetMask,
    UndecidableError,
    difference,
    power_bound,
    threshold_holds,
)
from .diffset import cross_diff_count, diff_count, diff_profile, distance_count
from .interval import Interval, precision
from .verifier import (
    LocalReport,
    check_decomposition,
    min_subset_bnb,
    trace_decomposition,
    verify_all_k,
    verify_exhaustive,
)

__all__ = [
    "CoefficientVector", "DifferenceVector", "DimensionError", "IntegerSet", "Interval",
    "LocalReport", "PointSet", "PolicyOverflowError", "PowerSum", "SubsetMask",
    "UndecidableError", "build_baseline", "build_pn", "build_truncated",
    "check_decomposition", "cross_diff_count", "diff_count", "diff_profile", "difference",
    "distance_count", "mian_chowla", "min_subset_bnb", "power_bound", "precision",
    "threshold_holds", "trace_decomposition", "verify_all_k", "verify_exhaustive",
]
