"""Exact representations: hypercube points, trit differences, subsets, exponents.

The generators are fixed to ``r_j = 3**(j-1)``. A point of the hypercube
``{0,1}^n`` then embeds as a base-3 integer with digits in {0, 1}, and the
difference of two points is a base-3 integer with digits in {-1, 0, 1}.
Balanced-ternary expansions are unique, so distinct trit vectors give
distinct integers and every count below is an exact integer count.

Comparisons against ``k ** log2(3)`` never go through floats. Quantities of
the form ``sum c_i * N_i ** p`` (``p = log_4 3``) are kept in a normal form
where ``N ** p = 3**s * r ** p`` for ``N = 4**s * r``; equal-looking sums are
decided exactly and the rest by interval evaluation with escalating
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .interval import (
    Interval,
    escalation_schedule,
    precision,
    to_float_bounds,
    working_precision,
)

# 3**39 < 2**63 <= 3**40: int64 holds every difference code up to 39 levels.
NATIVE_MAX_LEVELS = 39
# Beyond this the integer model is refused rather than silently slowed down.
BIGINT_MAX_LEVELS = 2048


class PolicyOverflowError(OverflowError):
    """The requested number of levels exceeds the big-integer policy."""


class DimensionError(ValueError):
    """Vectors or sets over different generator counts were combined."""


class UndecidableError(ArithmeticError):
    """An interval comparison could not be separated at the precision cap."""


def check_levels(n: int) -> None:
    if n < 0:
        raise ValueError(f"generator count must be non-negative, got {n}")
    if n > BIGINT_MAX_LEVELS:
        raise PolicyOverflowError(
            f"{n} levels exceeds the big-integer policy limit of {BIGINT_MAX_LEVELS}"
        )


def is_native(n: int) -> bool:
    return n <= NATIVE_MAX_LEVELS


@lru_cache(maxsize=None)
def zero_code(n: int) -> int:
    """Canonical code of the all-zero difference, ``(3**n - 1) // 2``."""
    return (3**n - 1) // 2


# ---------------------------------------------------------------- vectors


@dataclass(frozen=True, order=True)
class CoefficientVector:
    """A hypercube vertex; bit ``j`` of ``mask`` is the coefficient of ``r_{j+1}``."""

    mask: int
    n: int

    def __post_init__(self):
        check_levels(self.n)
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} does not fit in {self.n} bits")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "CoefficientVector":
        mask = 0
        for j, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError(f"bit {j} is {b!r}, expected 0 or 1")
            mask |= b << j
        return cls(mask, len(bits))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.mask >> j) & 1 for j in range(self.n))

    def __len__(self) -> int:
        return self.n


def embed_base3(v: CoefficientVector) -> int:
    """Return ``sum bits_j * 3**j``."""
    check_levels(v.n)
    return _embed_mask(v.mask)


def _embed_mask(mask: int) -> int:
    value, power = 0, 1
    while mask:
        if mask & 1:
            value += power
        mask >>= 1
        power *= 3
    return value


def unembed_base3(value: int, n: int) -> CoefficientVector:
    """Inverse of :func:`embed_base3`; raises if a digit is 2 or the value is too long."""
    check_levels(n)
    if value < 0:
        raise ValueError(f"negative value {value} is not a hypercube point")
    mask, j, rest = 0, 0, value
    while rest:
        rest, digit = divmod(rest, 3)
        if digit == 2:
            raise ValueError(f"{value} has a base-3 digit 2; not a hypercube point")
        if j >= n:
            raise ValueError(f"{value} needs more than {n} base-3 digits")
        mask |= digit << j
        j += 1
    return CoefficientVector(mask, n)


@dataclass(frozen=True)
class DifferenceVector:
    trits: tuple[int, ...]

    def __post_init__(self):
        if any(t not in (-1, 0, 1) for t in self.trits):
            raise ValueError(f"trits must be in {{-1, 0, 1}}: {self.trits}")

    @property
    def n(self) -> int:
        return len(self.trits)

    @property
    def canonical_code(self) -> int:
        """Offset base-3 code ``sum (trit_j + 1) * 3**j``, in ``[0, 3**n)``."""
        code, power = 0, 1
        for t in self.trits:
            code += (t + 1) * power
            power *= 3
        return code

    @property
    def value(self) -> int:
        """The difference itself in the integer model, ``sum trit_j * 3**j``."""
        return self.canonical_code - zero_code(self.n)

    @classmethod
    def from_code(cls, code: int, n: int) -> "DifferenceVector":
        if not 0 <= code < 3**n:
            raise ValueError(f"code {code} out of range for {n} trits")
        trits = []
        for _ in range(n):
            code, digit = divmod(code, 3)
            trits.append(digit - 1)
        return cls(tuple(trits))

    def negate(self) -> "DifferenceVector":
        return DifferenceVector(tuple(-t for t in self.trits))


def difference(u: CoefficientVector, v: CoefficientVector) -> DifferenceVector:
    if u.n != v.n:
        raise DimensionError(f"cannot subtract vectors over {u.n} and {v.n} generators")
    return DifferenceVector(tuple(a - b for a, b in zip(u.bits, v.bits)))


# ---------------------------------------------------------------- sets


@dataclass(frozen=True)
class PointSet:
    """Duplicate-free, ordered hypercube points over a shared generator count."""

    elements: tuple[CoefficientVector, ...]
    n: int
    _values: np.ndarray | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        check_levels(self.n)
        seen = set()
        for e in self.elements:
            if e.n != self.n:
                raise DimensionError(f"element over {e.n} generators in a set over {self.n}")
            if e.mask in seen:
                raise ValueError(f"duplicate element {e.bits}")
            seen.add(e.mask)

    @classmethod
    def from_masks(cls, masks: Iterable[int], n: int) -> "PointSet":
        return cls(tuple(CoefficientVector(m, n) for m in masks), n)

    @classmethod
    def from_values(cls, values: Iterable[int], n: int) -> "PointSet":
        return cls(tuple(unembed_base3(v, n) for v in values), n)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[CoefficientVector]:
        return iter(self.elements)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(e.mask for e in self.elements)

    @property
    def values(self) -> np.ndarray:
        """Embedded integers; int64 while native, Python ints (object) beyond."""
        if self._values is None:
            ints = [_embed_mask(e.mask) for e in self.elements]
            dtype = np.int64 if is_native(self.n) else object
            object.__setattr__(self, "_values", np.array(ints, dtype=dtype))
        return self._values

    @property
    def code_offset(self) -> int:
        return zero_code(self.n)

    def subset(self, mask: "SubsetMask") -> "PointSet":
        if mask.size != len(self):
            raise DimensionError(f"mask over {mask.size} elements applied to {len(self)}")
        return PointSet(tuple(self.elements[i] for i in mask.indices()), self.n)


@dataclass(frozen=True)
class IntegerSet:
    """A plain set of integers (baselines); same engine interface as PointSet."""

    ints: tuple[int, ...]
    kind: str = "integer"

    def __post_init__(self):
        if len(set(self.ints)) != len(self.ints):
            raise ValueError("duplicate integers in set")

    def __len__(self) -> int:
        return len(self.ints)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ints)

    @property
    def values(self) -> np.ndarray:
        big = max((abs(v) for v in self.ints), default=0) >= 2**62
        return np.array(self.ints, dtype=object if big else np.int64)

    @property
    def code_offset(self) -> int:
        return 0

    def subset(self, mask: "SubsetMask") -> "IntegerSet":
        if mask.size != len(self):
            raise DimensionError(f"mask over {mask.size} elements applied to {len(self)}")
        return IntegerSet(tuple(self.ints[i] for i in mask.indices()), self.kind)


@dataclass(frozen=True, order=True)
class SubsetMask:
    """Bit ``i`` set means element ``i`` of the ground set is selected."""

    mask: int
    size: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.size:
            raise ValueError(f"mask {self.mask:#x} does not fit a ground set of {self.size}")

    @classmethod
    def from_indices(cls, indices: Iterable[int], size: int) -> "SubsetMask":
        m = 0
        for i in indices:
            if not 0 <= i < size:
                raise IndexError(f"index {i} outside ground set of {size}")
            m |= 1 << i
        return cls(m, size)

    @property
    def popcount(self) -> int:
        return bin(self.mask).count("1")

    def indices(self) -> list[int]:
        return [i for i in range(self.size) if (self.mask >> i) & 1]

    def __str__(self) -> str:
        return format(self.mask, f"0{max(self.size, 1)}b")[::-1]


# ---------------------------------------------------------------- exponents


@lru_cache(maxsize=64)
def _p_at(prec: int) -> Interval:
    with precision(prec):
        return Interval.log_of(3) / Interval.log_of(4)


def p_interval() -> Interval:
    """Enclosure of ``p = log_4 3`` at the working precision."""
    return _p_at(working_precision())


def log2_3_interval() -> Interval:
    return _log2_3_at(working_precision())


@lru_cache(maxsize=64)
def _log2_3_at(prec: int) -> Interval:
    with precision(prec):
        return Interval.log_of(3) / Interval.log_of(2)


@dataclass(frozen=True)
class ExactExponent:
    name: str
    enclosure: Interval


def _make_exponents(bits: int = 128) -> tuple[ExactExponent, ExactExponent]:
    with precision(bits):
        return ExactExponent("p", _p_at(bits)), ExactExponent("log2_3", _log2_3_at(bits))


P_EXPONENT, LOG2_3 = _make_exponents()


def pow_p(base: int) -> Interval:
    """Enclosure of ``base ** p``; exact for powers of four."""
    if base < 0:
        raise ValueError("negative base")
    if base == 0:
        return Interval(0)
    s, r = _split_four(base)
    if r == 1:
        return Interval(3**s)
    return Interval(3**s) * Interval(r).power(p_interval())


def _split_four(base: int) -> tuple[int, int]:
    s = 0
    while base % 4 == 0:
        base //= 4
        s += 1
    return s, base


# ---------------------------------------------------------------- exact sums of powers


class PowerSum:
    """An exact linear combination ``sum coef * base ** p`` with integer coefficients.

    Bases are reduced modulo powers of four, so ``4**p == 3`` is applied
    symbolically: ``PowerSum.power(4 * N) == 3 * PowerSum.power(N)``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, int] | None = None):
        self.terms = {b: c for b, c in (terms or {}).items() if c}

    @classmethod
    def integer(cls, m: int) -> "PowerSum":
        return cls({1: m})

    @classmethod
    def power(cls, base: int, coef: int = 1) -> "PowerSum":
        if base < 0:
            raise ValueError("negative base")
        if base == 0:
            return cls()
        s, r = _split_four(base)
        return cls({r: coef * 3**s})

    def __add__(self, other: "PowerSum") -> "PowerSum":
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, 0) + c
        return PowerSum(out)

    def __neg__(self) -> "PowerSum":
        return PowerSum({b: -c for b, c in self.terms.items()})

    def __sub__(self, other: "PowerSum") -> "PowerSum":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PowerSum) and self.terms == other.terms

    def __repr__(self) -> str:
        parts = [f"{c}" if b == 1 else f"{c}*{b}^p" for b, c in sorted(self.terms.items())]
        return "PowerSum(" + " + ".join(parts or ["0"]) + ")"

    def enclosure(self) -> Interval:
        total = Interval(0)
        for b, c in self.terms.items():
            term = Interval(c) if b == 1 else Interval(c) * Interval(b).power(p_interval())
            total = total + term
        return total

    def float_bounds(self) -> tuple[float, float] | None:
        """Cheap outward double bounds, or None if a coefficient is too large."""
        lo = hi = 0.0
        for b, c in self.terms.items():
            if abs(c) >= 2**53:
                return None
            blo, bhi = _base_float_bounds(b)
            if c > 0:
                tlo, thi = c * blo, c * bhi
            else:
                tlo, thi = c * bhi, c * blo
            lo = math.nextafter(lo + math.nextafter(tlo, -math.inf), -math.inf)
            hi = math.nextafter(hi + math.nextafter(thi, math.inf), math.inf)
        return lo, hi

    def sign(self) -> int:
        """Exact sign of the sum: -1, 0 or 1.

        Raises :class:`UndecidableError` if intervals cannot separate the sum
        from zero at the precision cap.
        """
        coefs = list(self.terms.values())
        if not coefs:
            return 0
        if all(c > 0 for c in coefs):
            return 1
        if all(c < 0 for c in coefs):
            return -1
        fast = self.float_bounds()
        if fast is not None:
            if fast[0] > 0:
                return 1
            if fast[1] < 0:
                return -1
        for bits in escalation_schedule():
            with precision(bits):
                iv = self.enclosure()
            if iv.is_positive():
                return 1
            if iv.is_negative():
                return -1
        raise UndecidableError(f"cannot decide the sign of {self!r} at the precision cap")


@lru_cache(maxsize=1 << 16)
def _base_float_bounds(base: int) -> tuple[float, float]:
    if base == 1:
        return 1.0, 1.0
    with precision(96):
        return to_float_bounds(Interval(base).power(p_interval()))


def power_bound(k: int) -> Interval:
    """Enclosure of ``k ** log2(3)``; a point interval when ``k`` is a power of two."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return pow_p(k * k)


def threshold_holds(m: int, k: int, factor: int = 1) -> bool:
    """Decide ``m >= factor * k ** log2(3)`` exactly.

    Powers of two compare integers (``(2**s) ** log2(3) == 3**s``); other
    ``k`` go through interval evaluation with escalating precision.
    """
    if m < 1 or k < 1:
        raise ValueError(f"threshold_holds needs m >= 1 and k >= 1, got m={m}, k={k}")
    if k & (k - 1) == 0:
        s = k.bit_length() - 1
        return m >= factor * 3**s
    return (PowerSum.integer(m) - PowerSum.power(k * k, factor)).sign() >= 0
