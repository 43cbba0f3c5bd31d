"""Exact difference sets, cross-difference sets and distance counts.

Sets are anything with an integer ``values`` array and a ``code_offset``
(:class:`~localdiff.core.PointSet` or :class:`~localdiff.core.IntegerSet`).
For hypercube sets the canonical trit code of ``u - v`` equals
``embed(u) - embed(v) + (3**n - 1) / 2``, so deduplicating integer
differences is the same as deduplicating canonical codes.
"""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from typing import Protocol

import numpy as np

from .core import DimensionError, PointSet

# largest value range marked in a dense bitmap before falling back to hashing
BITMAP_LIMIT = 1 << 26
ROW_BLOCK = 256


class SetLike(Protocol):
    values: np.ndarray
    code_offset: int

    def __len__(self) -> int: ...


def _check_compatible(A: SetLike, B: SetLike) -> None:
    if isinstance(A, PointSet) and isinstance(B, PointSet):
        if A.n != B.n:
            raise DimensionError(f"sets over {A.n} and {B.n} generators")
    elif isinstance(A, PointSet) != isinstance(B, PointSet):
        raise DimensionError("cannot mix hypercube sets and integer sets")


def _row_blocks(n_rows: int, threads: int) -> list[tuple[int, int]]:
    step = max(ROW_BLOCK, -(-n_rows // max(threads, 1)))
    return [(i, min(i + step, n_rows)) for i in range(0, n_rows, step)]


def _bitmap_marks(a: np.ndarray, b: np.ndarray, base: int, span: int, lo: int, hi: int) -> np.ndarray:
    seen = np.zeros(span, dtype=bool)
    for i in range(lo, hi, ROW_BLOCK):
        block = a[i : min(i + ROW_BLOCK, hi), None] - b[None, :] - base
        seen[block.ravel()] = True
    return seen


def _hash_codes(a: np.ndarray, b: np.ndarray, lo: int, hi: int) -> set:
    found: set = set()
    for i in range(lo, hi, ROW_BLOCK):
        block = a[i : min(i + ROW_BLOCK, hi), None] - b[None, :]
        found.update(block.ravel().tolist())
    return found


def difference_values(A: SetLike, B: SetLike | None = None, threads: int = 1) -> np.ndarray:
    """Sorted distinct values of ``a - b`` for ``a`` in A, ``b`` in B (B defaults to A)."""
    B = A if B is None else B
    _check_compatible(A, B)
    a, b = A.values, B.values
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    native = a.dtype != object and b.dtype != object
    base = int(a.min()) - int(b.max())
    span = int(a.max()) - int(b.min()) - base + 1
    blocks = _row_blocks(len(a), threads)
    if native and span <= BITMAP_LIMIT:
        if threads > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(threads) as pool:
                parts = list(pool.map(lambda r: _bitmap_marks(a, b, base, span, *r), blocks))
            seen = np.logical_or.reduce(parts)
        else:
            seen = _bitmap_marks(a, b, base, span, 0, len(a))
        return np.flatnonzero(seen).astype(np.int64) + base
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            found = set().union(*pool.map(lambda r: _hash_codes(a, b, *r), blocks))
    else:
        found = _hash_codes(a, b, 0, len(a))
    ordered = sorted(found)
    return np.array(ordered, dtype=np.int64 if native else object)


def diff_count(A: SetLike, threads: int = 1) -> int:
    """``|A - A|``; always odd for a non-empty set."""
    if len(A) < 1:
        raise ValueError("diff_count needs a non-empty set")
    return int(len(difference_values(A, threads=threads)))


def cross_diff_count(A: SetLike, B: SetLike, threads: int = 1) -> int:
    """``|A - B|``; zero when either set is empty."""
    return int(len(difference_values(A, B, threads=threads)))


def distance_count(A: SetLike) -> int:
    """Number of distinct positive differences, ``(|A - A| - 1) / 2``."""
    return (diff_count(A) - 1) // 2


def difference_codes(A: SetLike, B: SetLike | None = None) -> np.ndarray:
    """Sorted distinct canonical codes of ``A - B``."""
    return difference_values(A, B) + A.code_offset


def diff_profile(A: SetLike) -> dict[int, int]:
    """Multiplicity of each canonical code over all ordered pairs, sorted by code.

    Uses the sort-based path so the output order never depends on hashing.
    """
    if len(A) < 1:
        raise ValueError("diff_profile needs a non-empty set")
    a = A.values
    diffs = (a[:, None] - a[None, :]).ravel()
    codes, counts = np.unique(diffs, return_counts=True)
    offset = A.code_offset
    return {int(c) + offset: int(k) for c, k in zip(codes, counts)}


def profile_csv(profile: dict[int, int]) -> str:
    out = io.StringIO()
    out.write("code,count\n")
    for code in sorted(profile):
        out.write(f"{code},{profile[code]}\n")
    return out.getvalue()


def parse_profile_csv(text: str) -> dict[int, int]:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != "code,count":
        raise ValueError("profile CSV must start with the header 'code,count'")
    profile = {}
    for ln in lines[1:]:
        code, count = ln.split(",")
        profile[int(code)] = int(count)
    return profile

