"""Checking the local property: every k-subset spans at least k**log2(3) differences.

Three routes:

* :func:`verify_exhaustive` enumerates every k-subset (colex order) with a
  vectorised distinct-count over a precomputed pair-code matrix;
* :func:`min_subset_bnb` finds the minimum by include/exclude branch and
  bound, pruning with the difference count of the chosen prefix (adding
  elements never removes a difference);
* :func:`trace_decomposition` replays the inductive argument on a concrete
  subset of a hypercube set and checks every inequality at every node.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .core import PointSet, PowerSum, SubsetMask, _embed_mask, power_bound, threshold_holds
from .diffset import SetLike
from .interval import Interval, format_endpoint

EXHAUSTIVE_CAP = 20
DEFAULT_BUDGET = 10**8
CHECKPOINT_EVERY = 10**6
# pair codes gathered per vectorised chunk
CHUNK_ENTRIES = 1 << 21

MODES = ("exhaustive", "branch_and_bound")


class CapExceededError(ValueError):
    """Ground set too large for exhaustive enumeration; use branch and bound."""


class TraceAssertionError(AssertionError):
    """A node of the decomposition violated one of the checked inequalities."""

    def __init__(self, message: str, node: "DecompositionTrace"):
        super().__init__(f"{message} at {node}")
        self.node = node


@dataclass(frozen=True)
class LocalReport:
    k: int
    min_diff: int
    witness: SubsetMask
    bound: Interval
    holds: bool
    subsets_checked: int
    mode: str
    complete: bool = True
    nodes: int = 0

    @property
    def bound_text(self) -> tuple[str, str]:
        return format_endpoint(self.bound, 20)

    def row(self) -> dict:
        lo, hi = self.bound_text
        return {
            "k": self.k,
            "min_diff": self.min_diff,
            "bound_lo": lo,
            "bound_hi": hi,
            "holds": self.holds,
            "mode": self.mode,
            "subsets_checked": self.subsets_checked,
        }


def _report(k: int, min_diff: int, mask: int, size: int, checked: int, mode: str,
            complete: bool = True, nodes: int = 0) -> LocalReport:
    return LocalReport(
        k=k,
        min_diff=min_diff,
        witness=SubsetMask(mask, size),
        bound=power_bound(k),
        holds=threshold_holds(min_diff, k),
        subsets_checked=checked,
        mode=mode,
        complete=complete,
        nodes=nodes,
    )


def pair_code_matrix(S: SetLike) -> tuple[np.ndarray, int]:
    """Matrix of compact codes: entry (i, j) ranks ``s_i - s_j`` among all differences of S."""
    vals = S.values
    diffs = vals[:, None] - vals[None, :]
    uniq, inverse = np.unique(diffs.ravel(), return_inverse=True)
    return inverse.reshape(diffs.shape).astype(np.int32), len(uniq)


def colex_combinations(m: int, k: int) -> np.ndarray:
    """All k-subsets of range(m) as index rows, ordered by ascending bitmask (colex)."""
    combos = np.array(list(combinations(range(m), k)), dtype=np.int64).reshape(-1, k)
    masks = (np.int64(1) << combos).sum(axis=1)
    return combos[np.argsort(masks, kind="stable")]


def _distinct_per_row(codes: np.ndarray) -> np.ndarray:
    codes = np.sort(codes, axis=1)
    return 1 + np.count_nonzero(np.diff(codes, axis=1), axis=1)


def _chunk_min(D: np.ndarray, combos: np.ndarray, start: int, stop: int) -> tuple[int, int]:
    idx = combos[start:stop]
    k = idx.shape[1]
    codes = D[idx[:, :, None], idx[:, None, :]].reshape(len(idx), k * k)
    counts = _distinct_per_row(codes)
    best = int(np.argmin(counts))
    return int(counts[best]), start + best


def verify_exhaustive(P: SetLike, k: int, cap: int = EXHAUSTIVE_CAP, threads: int = 1) -> LocalReport:
    """Minimum of ``|Q - Q|`` over all k-subsets Q of P, with the colex-first witness."""
    m = len(P)
    if m > cap:
        raise CapExceededError(
            f"{m} elements exceeds the exhaustive cap of {cap}; use branch_and_bound mode"
        )
    if not 1 <= k <= m:
        raise ValueError(f"k must lie in [1, {m}], got {k}")
    D, _ = pair_code_matrix(P)
    combos = colex_combinations(m, k)
    step = max(1, CHUNK_ENTRIES // (k * k))
    spans = [(s, min(s + step, len(combos))) for s in range(0, len(combos), step)]
    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda sp: _chunk_min(D, combos, *sp), spans))
    else:
        results = [_chunk_min(D, combos, *sp) for sp in spans]
    # ties go to the earliest colex rank
    min_diff, rank = min(results)
    mask = int(sum(1 << int(i) for i in combos[rank]))
    return _report(k, min_diff, mask, m, len(combos), "exhaustive")


def verify_all_k(P: SetLike, cap: int = EXHAUSTIVE_CAP, threads: int = 1) -> list[LocalReport]:
    if len(P) > cap:
        raise CapExceededError(
            f"{len(P)} elements exceeds the exhaustive cap of {cap}; use branch_and_bound mode"
        )
    return [verify_exhaustive(P, k, cap=cap, threads=threads) for k in range(1, len(P) + 1)]


# ---------------------------------------------------------------- branch and bound


@dataclass
class BnbCheckpoint:
    """Resumable search state: the DFS stack plus the incumbent."""

    k: int
    stack: list[tuple[int, tuple[int, ...]]]
    best: int | None
    best_mask: int
    nodes: int
    leaves: int


def min_subset_bnb(
    P: SetLike,
    k: int,
    budget: int = DEFAULT_BUDGET,
    checkpoint_every: int = CHECKPOINT_EVERY,
    on_checkpoint: Callable[[BnbCheckpoint], None] | None = None,
    resume: BnbCheckpoint | None = None,
) -> LocalReport:
    """Exact minimum of ``|Q - Q|`` over k-subsets by include-first branch and bound.

    Difference sets are Python-int bitsets over the compact codes of P; the
    prefix count is a valid lower bound for every completion. When the node
    budget runs out the best subset found so far is returned with
    ``complete=False``; its count is then only an upper bound on the minimum.
    """
    m = len(P)
    if not 1 <= k <= m:
        raise ValueError(f"k must lie in [1, {m}], got {k}")
    D, _ = pair_code_matrix(P)
    rows = D.tolist()
    self_bit = 1 << int(D[0, 0])
    pair_bits = [[(1 << rows[i][j]) | (1 << rows[j][i]) for j in range(m)] for i in range(m)]

    def bits_of(chosen: Sequence[int]) -> int:
        acc = self_bit if chosen else 0
        for x, i in enumerate(chosen):
            for j in chosen[:x]:
                acc |= pair_bits[i][j]
        return acc

    if resume is not None:
        if resume.k != k:
            raise ValueError("checkpoint was taken for a different k")
        stack = [(pos, chosen, bits_of(chosen)) for pos, chosen in resume.stack]
        best = math.inf if resume.best is None else resume.best
        best_mask, nodes, leaves = resume.best_mask, resume.nodes, resume.leaves
    else:
        # the first k elements seed the incumbent so a cut-short search still has a witness
        stack = [(0, (), 0)]
        best, best_mask = bits_of(range(k)).bit_count(), (1 << k) - 1
        nodes, leaves = 0, 0

    while stack:
        if nodes >= budget:
            break
        pos, chosen, bits = stack.pop()
        nodes += 1
        if on_checkpoint is not None and nodes % checkpoint_every == 0:
            on_checkpoint(BnbCheckpoint(
                k, [(p, c) for p, c, _ in stack] + [(pos, chosen)],
                None if best == math.inf else int(best), best_mask, nodes - 1, leaves,
            ))
        if len(chosen) == k:
            leaves += 1
            count = bits.bit_count()
            if count < best:
                best = count
                best_mask = sum(1 << i for i in chosen)
            continue
        if m - pos < k - len(chosen):
            continue
        # exclude is pushed first so that include is explored first
        stack.append((pos + 1, chosen, bits))
        new_bits = bits | self_bit
        row = pair_bits[pos]
        for j in chosen:
            new_bits |= row[j]
        if _popcount(new_bits) < best:
            stack.append((pos + 1, chosen + (pos,), new_bits))

    complete = not stack
    return _report(k, int(best), best_mask, m, leaves, "branch_and_bound", complete, nodes)


_popcount = int.bit_count


# ---------------------------------------------------------------- proof instrumentation


@dataclass(frozen=True)
class DecompositionTrace:
    """One internal node of the inductive decomposition.

    ``t1``/``t2`` are bitmasks over the generators above ``level``; ``a, b``
    split the first part by the coefficient of generator ``level``, ``c, d``
    the second. ``class_counts`` holds ``|A-C|, |B-D|, |A-D|, |B-C|``.
    """

    level: int
    t1: int
    t2: int
    a: int
    b: int
    c: int
    d: int
    cross_count: int
    class_counts: tuple[int, int, int, int]
    three_term_bound: tuple[float, float] = field(repr=False)
    product_bound: tuple[float, float] = field(repr=False)

    @property
    def inequality_lhs(self) -> int:
        return self.cross_count

    @property
    def inequality_rhs(self) -> tuple[float, float]:
        return self.three_term_bound


def _diff_bitset(xs: Sequence[int], ys: Sequence[int], offset: int) -> int:
    """Bit ``x - y + offset`` set for every pair."""
    rev = 0
    for y in ys:
        rev |= 1 << (offset - y)
    acc = 0
    for x in xs:
        acc |= rev << x
    return acc


def _range_mask(start: int, stop: int) -> int:
    return ((1 << (stop - start)) - 1) << start if stop > start else 0


class _Decomposer:
    def __init__(self, n: int, collect: bool, memo: dict | None):
        self.n = n
        self.embed = [_embed_mask(m) for m in range(1 << n)] if n <= 20 else None
        self.collect = collect
        self.memo = memo
        self.traces: list[DecompositionTrace] = []
        self.nodes = 0

    def value(self, local_mask: int) -> int:
        return self.embed[local_mask] if self.embed is not None else _embed_mask(local_mask)

    def visit(self, level: int, X: tuple[int, ...], Y: tuple[int, ...], t1: int, t2: int) -> None:
        key = (level, X, Y)
        if self.memo is not None and not self.collect and key in self.memo:
            return
        top = 1 << (level - 1)
        A = tuple(x for x in X if not x & top)
        B = tuple(x - top for x in X if x & top)
        C = tuple(y for y in Y if not y & top)
        D = tuple(y - top for y in Y if y & top)
        self._check_node(level, X, Y, A, B, C, D, t1, t2)
        self.nodes += 1
        if self.memo is not None:
            self.memo[key] = True
        if level - 1 >= 1:
            for P1, P2, s1, s2 in ((A, C, t1, t2), (A, D, t1, t2 | top),
                                   (B, C, t1 | top, t2), (B, D, t1 | top, t2 | top)):
                if P1 and P2:
                    self.visit(level - 1, P1, P2, s1, s2)

    def _check_node(self, level, X, Y, A, B, C, D, t1, t2) -> None:
        half = 3 ** (level - 1)
        H = (3**level - 1) // 2
        h = (half - 1) // 2
        xa = [self.value(x) for x in A]
        xb = [self.value(x) + half for x in B]
        yc = [self.value(y) for y in C]
        yd = [self.value(y) + half for y in D]
        AC, BD = _diff_bitset(xa, yc, H), _diff_bitset(xb, yd, H)
        AD, BC = _diff_bitset(xa, yd, H), _diff_bitset(xb, yc, H)
        full = AC | BD | AD | BC
        lhs = _popcount(full)
        counts = (_popcount(AC), _popcount(BD), _popcount(AD), _popcount(BC))
        a, b, c, d = len(A), len(B), len(C), len(D)

        three_bounds, product_bounds, tight_ok = _node_bounds(a, b, c, d)
        node = DecompositionTrace(
            level, t1, t2, a, b, c, d, lhs, counts, three_bounds, product_bounds,
        )
        if self.collect:
            self.traces.append(node)

        zero_band = _range_mask(H - h, H + h + 1)
        neg_band = _range_mask(0, H - h)
        pos_band = _range_mask(H + h + 1, 2 * H + 1)
        if (AC | BD) & ~zero_band or AD & ~neg_band or BC & ~pos_band:
            raise TraceAssertionError("a difference class has the wrong generator coefficient", node)
        if (AC | BD) & AD or (AC | BD) & BC or AD & BC:
            raise TraceAssertionError("difference classes are not pairwise disjoint", node)
        if counts[2] + counts[3] + max(counts[0], counts[1]) > lhs:
            raise TraceAssertionError("class sum exceeds the cross difference count", node)
        if not _at_least(lhs, three_bounds, _three_terms(a, b, c, d)):
            raise TraceAssertionError("three-term lower bound fails", node)
        if not tight_ok:
            raise TraceAssertionError("tight inequality fails", node)
        if not _at_least(lhs, product_bounds, PowerSum.power((a + b) * (c + d))):
            raise TraceAssertionError("product lower bound fails", node)


def _three_terms(a: int, b: int, c: int, d: int) -> PowerSum:
    """``(ad)^p + (bc)^p + max(ac, bd)^p``; the max plays the role of ``ac >= bd``."""
    return PowerSum.power(a * d) + PowerSum.power(b * c) + PowerSum.power(max(a * c, b * d))


@lru_cache(maxsize=1 << 16)
def _node_bounds(a: int, b: int, c: int, d: int) -> tuple[tuple[float, float], tuple[float, float], bool]:
    three = _three_terms(a, b, c, d)
    product = PowerSum.power((a + b) * (c + d))
    tight_ok = (three - product).sign() >= 0
    return three.float_bounds(), product.float_bounds(), tight_ok


def _at_least(m: int, bounds: tuple[float, float], rhs: PowerSum) -> bool:
    """Exact ``m >= rhs``, short-circuited when the float enclosure already decides."""
    if m >= bounds[1]:
        return True
    if m < bounds[0]:
        return False
    return (PowerSum.integer(m) - rhs).sign() >= 0


def _subset_masks(P: PointSet, mask: SubsetMask) -> tuple[int, ...]:
    if not isinstance(P, PointSet):
        raise TypeError("trace_decomposition needs a hypercube PointSet")
    if mask.size != len(P):
        raise ValueError(f"mask over {mask.size} elements applied to {len(P)}")
    return tuple(sorted(P.elements[i].mask for i in mask.indices()))


def trace_decomposition(P: PointSet, mask: SubsetMask) -> list[DecompositionTrace]:
    """Replay the induction on ``Q = P[mask]`` and return every internal node.

    The root is ``Q_1 = Q_2 = Q`` at level ``n``. Each node splits both parts
    on the coefficient of the top generator and recurses on the four
    non-empty pairings. Any failed check raises :class:`TraceAssertionError`.
    """
    Q = _subset_masks(P, mask)
    walker = _Decomposer(P.n, collect=True, memo=None)
    if Q and P.n >= 1:
        walker.visit(P.n, Q, Q, 0, 0)
    return walker.traces


def check_decomposition(P: PointSet, mask: SubsetMask, memo: dict | None = None) -> int:
    """Like :func:`trace_decomposition` without collecting nodes; returns nodes checked.

    A shared ``memo`` skips (level, part, part) pairs already verified,
    which is sound because the checks only depend on the local patterns.
    """
    Q = _subset_masks(P, mask)
    walker = _Decomposer(P.n, collect=False, memo=memo)
    if Q and P.n >= 1:
        walker.visit(P.n, Q, Q, 0, 0)
    return walker.nodes
