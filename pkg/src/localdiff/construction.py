"""The hypercube sets ``P_j`` and the comparison baselines."""

from __future__ import annotations

import numpy as np

from .core import IntegerSet, PointSet, PolicyOverflowError, check_levels

BASELINE_KINDS = ("arithmetic_progression", "sidon", "random_integers")

# 2**26 points already needs gigabytes of pair data; refuse to enumerate more
MAX_ENUMERATED_LEVELS = 26


def build_pn(levels: int) -> PointSet:
    """All ``2**levels`` hypercube points, ascending by their base-3 embedding.

    ``P_0`` is the single empty vector (the real number 1 before embedding).
    Comparing 0/1 base-3 digit strings is the same as comparing the bitmasks,
    so ascending masks give ascending embedded values.
    """
    check_levels(levels)
    if levels > MAX_ENUMERATED_LEVELS:
        raise PolicyOverflowError(
            f"P_{levels} has 2**{levels} points; enumeration is capped at {MAX_ENUMERATED_LEVELS} levels"
        )
    return PointSet.from_masks(range(1 << levels), levels)


def build_truncated(n: int) -> PointSet:
    """The first ``n`` points of ``P_m`` with ``m = ceil(log2 n)``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if levels_for(n) > MAX_ENUMERATED_LEVELS:
        raise PolicyOverflowError(f"n={n} exceeds the enumeration cap of 2**{MAX_ENUMERATED_LEVELS}")
    return PointSet.from_masks(range(n), levels_for(n))


def levels_for(n: int) -> int:
    """Smallest ``m`` with ``2**m >= n``."""
    return (n - 1).bit_length()


def mian_chowla(n: int) -> list[int]:
    """Greedy Sidon sequence 1, 2, 4, 8, 13, 21, 31, ... (first ``n`` terms)."""
    terms: list[int] = []
    diffs: set[int] = set()
    candidate = 1
    while len(terms) < n:
        new = {candidate - t for t in terms}
        if len(new) == len(terms) and not (new & diffs):
            terms.append(candidate)
            diffs |= new
        candidate += 1
    return terms


def build_baseline(kind: str, n: int, seed: int = 0) -> IntegerSet:
    """Integer comparison sets.

    ``random_integers`` draws ``n`` distinct values uniformly from
    ``[0, n**3]``; the range keeps collisions rare without making the
    difference set trivially maximal.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if levels_for(n) > MAX_ENUMERATED_LEVELS:
        raise PolicyOverflowError(f"n={n} exceeds the enumeration cap of 2**{MAX_ENUMERATED_LEVELS}")
    if kind == "arithmetic_progression":
        return IntegerSet(tuple(range(n)), kind)
    if kind == "sidon":
        return IntegerSet(tuple(mian_chowla(n)), kind)
    if kind == "random_integers":
        rng = np.random.default_rng(seed)
        draws = rng.choice(n**3 + 1, size=n, replace=False)
        return IntegerSet(tuple(sorted(int(v) for v in draws)), kind)
    raise ValueError(f"unknown baseline kind {kind!r}; expected one of {BASELINE_KINDS}")

