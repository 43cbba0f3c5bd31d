"""Outward-rounded interval arithmetic on top of mpmath's binary floats.

Every endpoint is an mpmath ``mpf`` value tuple. Lower endpoints are rounded
toward -inf and upper endpoints toward +inf. The transcendental functions
(``exp``, ``log``) are widened by one extra unit in the last place on each
side, so the enclosure does not depend on mpmath's transcendentals being
correctly rounded in the requested direction.

Working precision is a context variable measured in bits::

    with precision(128):
        p = Interval.log_of(3) / Interval.log_of(4)
"""

from __future__ import annotations

import contextlib
import contextvars
import os
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from typing import Iterator, Union

import mpmath
from mpmath import libmp
from mpmath.libmp import round_ceiling as _UP
from mpmath.libmp import round_floor as _DOWN

DEFAULT_PRECISION = 64
DEFAULT_PRECISION_CAP_DIGITS = 512

_precision: contextvars.ContextVar[int] = contextvars.ContextVar(
    "localdiff_interval_precision", default=DEFAULT_PRECISION
)

Number = Union[int, Fraction, float, str, "mpmath.mpf"]


def working_precision() -> int:
    return _precision.get()


@contextlib.contextmanager
def precision(bits: int) -> Iterator[int]:
    """Temporarily set the working precision (in bits)."""
    if bits < 8:
        raise ValueError(f"precision too small: {bits} bits")
    token = _precision.set(int(bits))
    try:
        yield bits
    finally:
        _precision.reset(token)


def digits_to_bits(digits: int) -> int:
    # log2(10) < 3.3220
    return int(digits * 3.3220) + 1


def precision_cap_bits() -> int:
    """Escalation cap in bits; ``DIFFSET_PRECISION_CAP`` (decimal digits) overrides."""
    raw = os.environ.get("DIFFSET_PRECISION_CAP")
    digits = DEFAULT_PRECISION_CAP_DIGITS
    if raw:
        digits = int(raw)
        if digits < 4:
            raise ValueError("DIFFSET_PRECISION_CAP must be at least 4 digits")
    return digits_to_bits(digits)


def escalation_schedule(start: int = DEFAULT_PRECISION, cap: int | None = None) -> Iterator[int]:
    """Yield geometrically growing precisions (bits), ending exactly at the cap."""
    cap = precision_cap_bits() if cap is None else cap
    bits = min(start, cap)
    while True:
        yield bits
        if bits >= cap:
            return
        bits = min(bits * 2, cap)


def _to_mpf(value: Number, prec: int, rnd: str) -> tuple:
    if isinstance(value, mpmath.mpf):
        return libmp.mpf_pos(value._mpf_, prec, rnd)
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return libmp.from_int(value, prec, rnd)
    if isinstance(value, float):
        return libmp.from_float(value, prec, rnd)
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return libmp.from_rational(value.numerator, value.denominator, prec, rnd)
    raise TypeError(f"cannot convert {type(value).__name__} to an interval endpoint")


def _ulp(x: tuple, prec: int) -> tuple:
    sign, man, exp, bc = x
    return libmp.from_man_exp(1, exp + bc - prec)


def _nudge(x: tuple, prec: int, rnd: str) -> tuple:
    if x == libmp.fzero:
        tiny = libmp.from_man_exp(1, -4 * prec)
        return libmp.mpf_neg(tiny) if rnd == _DOWN else tiny
    step = _ulp(x, prec)
    if rnd == _DOWN:
        return libmp.mpf_sub(x, step, prec, _DOWN)
    return libmp.mpf_add(x, step, prec, _UP)


class Interval:
    """A closed interval ``[lo, hi]`` of reals with outward-rounded endpoints."""

    __slots__ = ("_lo", "_hi")

    def __init__(self, lo: Number | "Interval", hi: Number | None = None):
        if isinstance(lo, Interval):
            self._lo, self._hi = lo._lo, lo._hi
            return
        prec = working_precision()
        if hi is None:
            hi = lo
        self._lo = _to_mpf(lo, prec, _DOWN)
        self._hi = _to_mpf(hi, prec, _UP)
        if libmp.mpf_gt(self._lo, self._hi):
            raise ValueError(f"empty interval: [{lo}, {hi}]")

    @classmethod
    def _raw(cls, lo: tuple, hi: tuple) -> "Interval":
        obj = cls.__new__(cls)
        obj._lo, obj._hi = lo, hi
        return obj

    @classmethod
    def coerce(cls, value: "Interval | Number") -> "Interval":
        return value if isinstance(value, Interval) else cls(value)

    # endpoints

    @property
    def lo(self) -> mpmath.mpf:
        return _exact_mpf(self._lo)

    @property
    def hi(self) -> mpmath.mpf:
        return _exact_mpf(self._hi)

    @property
    def width(self) -> mpmath.mpf:
        return _exact_mpf(libmp.mpf_sub(self._hi, self._lo, working_precision(), _UP))

    @property
    def mid(self) -> mpmath.mpf:
        s = libmp.mpf_add(self._lo, self._hi, working_precision() + 2)
        return _exact_mpf(libmp.mpf_shift(s, -1))

    def lo_fraction(self) -> Fraction:
        return _mpf_to_fraction(self._lo)

    def hi_fraction(self) -> Fraction:
        return _mpf_to_fraction(self._hi)

    def contains(self, value: Number) -> bool:
        x = Interval(value)
        return libmp.mpf_le(self._lo, x._lo) and libmp.mpf_ge(self._hi, x._hi)

    def is_positive(self) -> bool:
        return libmp.mpf_gt(self._lo, libmp.fzero)

    def is_negative(self) -> bool:
        return libmp.mpf_lt(self._hi, libmp.fzero)

    def is_point(self) -> bool:
        return self._lo == self._hi

    def certainly_gt(self, other: "Interval | Number") -> bool:
        other = Interval.coerce(other)
        return libmp.mpf_gt(self._lo, other._hi)

    def certainly_ge(self, other: "Interval | Number") -> bool:
        other = Interval.coerce(other)
        return libmp.mpf_ge(self._lo, other._hi)

    def certainly_lt(self, other: "Interval | Number") -> bool:
        other = Interval.coerce(other)
        return libmp.mpf_lt(self._hi, other._lo)

    def hull(self, other: "Interval") -> "Interval":
        lo = self._lo if libmp.mpf_le(self._lo, other._lo) else other._lo
        hi = self._hi if libmp.mpf_ge(self._hi, other._hi) else other._hi
        return Interval._raw(lo, hi)

    # arithmetic

    def __neg__(self) -> "Interval":
        return Interval._raw(libmp.mpf_neg(self._hi), libmp.mpf_neg(self._lo))

    def __add__(self, other: "Interval | Number") -> "Interval":
        other = Interval.coerce(other)
        prec = working_precision()
        return Interval._raw(
            libmp.mpf_add(self._lo, other._lo, prec, _DOWN),
            libmp.mpf_add(self._hi, other._hi, prec, _UP),
        )

    __radd__ = __add__

    def __sub__(self, other: "Interval | Number") -> "Interval":
        other = Interval.coerce(other)
        prec = working_precision()
        return Interval._raw(
            libmp.mpf_sub(self._lo, other._hi, prec, _DOWN),
            libmp.mpf_sub(self._hi, other._lo, prec, _UP),
        )

    def __rsub__(self, other: Number) -> "Interval":
        return Interval.coerce(other) - self

    def __mul__(self, other: "Interval | Number") -> "Interval":
        other = Interval.coerce(other)
        prec = working_precision()
        pairs = [(a, b) for a in (self._lo, self._hi) for b in (other._lo, other._hi)]
        los = [libmp.mpf_mul(a, b, prec, _DOWN) for a, b in pairs]
        his = [libmp.mpf_mul(a, b, prec, _UP) for a, b in pairs]
        return Interval._raw(_mpf_min(los), _mpf_max(his))

    __rmul__ = __mul__

    def __truediv__(self, other: "Interval | Number") -> "Interval":
        other = Interval.coerce(other)
        if not (other.is_positive() or other.is_negative()):
            raise ZeroDivisionError(f"interval division by {other!r}, which contains zero")
        prec = working_precision()
        pairs = [(a, b) for a in (self._lo, self._hi) for b in (other._lo, other._hi)]
        los = [libmp.mpf_div(a, b, prec, _DOWN) for a, b in pairs]
        his = [libmp.mpf_div(a, b, prec, _UP) for a, b in pairs]
        return Interval._raw(_mpf_min(los), _mpf_max(his))

    def __rtruediv__(self, other: Number) -> "Interval":
        return Interval.coerce(other) / self

    def __abs__(self) -> "Interval":
        if self.is_positive() or libmp.mpf_ge(self._lo, libmp.fzero):
            return self
        if libmp.mpf_le(self._hi, libmp.fzero):
            return -self
        top = _mpf_max([libmp.mpf_neg(self._lo), self._hi])
        return Interval._raw(libmp.fzero, top)

    def __pow__(self, exponent: "Interval | Number") -> "Interval":
        if isinstance(exponent, int) and not isinstance(exponent, bool):
            return self._pow_int(exponent)
        return self.power(exponent)

    def _pow_int(self, n: int) -> "Interval":
        if n < 0:
            return Interval(1) / self._pow_int(-n)
        if n == 0:
            return Interval(1)
        prec = working_precision()
        if n % 2 == 0:
            base = abs(self)
            return Interval._raw(
                libmp.mpf_pow_int(base._lo, n, prec, _DOWN),
                libmp.mpf_pow_int(base._hi, n, prec, _UP),
            )
        # odd powers are monotone increasing
        return Interval._raw(
            libmp.mpf_pow_int(self._lo, n, prec, _DOWN),
            libmp.mpf_pow_int(self._hi, n, prec, _UP),
        )

    def exp(self) -> "Interval":
        prec = working_precision()
        lo = libmp.mpf_exp(self._lo, prec, _DOWN)
        hi = libmp.mpf_exp(self._hi, prec, _UP)
        if self._lo != libmp.fzero:
            lo = _nudge(lo, prec, _DOWN)
            if libmp.mpf_lt(lo, libmp.fzero):
                lo = libmp.fzero
        if self._hi != libmp.fzero:
            hi = _nudge(hi, prec, _UP)
        return Interval._raw(lo, hi)

    def log(self) -> "Interval":
        if not self.is_positive():
            raise ValueError(f"log of non-positive interval {self!r}")
        prec = working_precision()
        lo = libmp.mpf_log(self._lo, prec, _DOWN)
        hi = libmp.mpf_log(self._hi, prec, _UP)
        if self._lo != libmp.fone:
            lo = _nudge(lo, prec, _DOWN)
        if self._hi != libmp.fone:
            hi = _nudge(hi, prec, _UP)
        return Interval._raw(lo, hi)

    def power(self, exponent: "Interval | Number") -> "Interval":
        """``self ** exponent`` for a non-negative base, via ``exp(y * log(x))``.

        A base touching zero is allowed only with a strictly positive exponent.
        """
        y = Interval.coerce(exponent)
        if libmp.mpf_lt(self._lo, libmp.fzero):
            raise ValueError(f"real power of interval with negative part {self!r}")
        if self._lo == libmp.fzero:
            if not y.is_positive():
                raise ValueError("0 ** y needs a strictly positive exponent")
            if self._hi == libmp.fzero:
                return Interval(0)
            top = Interval._raw(self._hi, self._hi).power(y)
            # on [0, h] the maximum sits at h, with the exponent end chosen by h <> 1
            return Interval._raw(libmp.fzero, top._hi)
        return (y * self.log()).exp()

    def split(self) -> tuple["Interval", "Interval"]:
        m = self.mid._mpf_
        return Interval._raw(self._lo, m), Interval._raw(m, self._hi)

    # constants

    @classmethod
    def log_of(cls, n: int) -> "Interval":
        return cls(n).log()

    def __repr__(self) -> str:
        return f"Interval[{self.format()}]"

    def format(self, digits: int = 17) -> str:
        lo, hi = format_endpoint(self, digits)
        return f"{lo}, {hi}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self._lo == other._lo and self._hi == other._hi

    def __hash__(self) -> int:
        return hash((self._lo, self._hi))


def _exact_mpf(raw: tuple) -> mpmath.mpf:
    # mpmath.mpf(raw) would round to the global 53-bit context
    return mpmath.mp.make_mpf(raw)


def _mpf_min(values: list) -> tuple:
    best = values[0]
    for v in values[1:]:
        if libmp.mpf_lt(v, best):
            best = v
    return best


def _mpf_max(values: list) -> tuple:
    best = values[0]
    for v in values[1:]:
        if libmp.mpf_gt(v, best):
            best = v
    return best


def _mpf_to_fraction(x: tuple) -> Fraction:
    sign, man, exp, bc = x
    if not man:
        return Fraction(0)
    value = Fraction(int(man)) * (Fraction(2) ** exp)
    return -value if sign else value


def to_float_bounds(iv: Interval) -> tuple[float, float]:
    """Outward-rounded double-precision bounds of an interval."""
    lo = libmp.to_float(libmp.mpf_pos(iv._lo, 53, _DOWN), rnd=_DOWN)
    hi = libmp.to_float(libmp.mpf_pos(iv._hi, 53, _UP), rnd=_UP)
    return lo, hi


def format_endpoint(iv: Interval, digits: int = 20) -> tuple[str, str]:
    """Decimal strings that still bound the interval (lo rounded down, hi up)."""
    lo = _decimal_string(iv._lo, digits, _DOWN)
    hi = _decimal_string(iv._hi, digits, _UP)
    return lo, hi


def _decimal_string(x: tuple, digits: int, rnd: str) -> str:
    value = _mpf_to_fraction(x)
    ctx = Context(prec=digits, rounding=ROUND_FLOOR if rnd == _DOWN else ROUND_CEILING)
    # Decimal(int) is exact, so the division is the only rounding step
    num = ctx.divide(Decimal(value.numerator), Decimal(value.denominator))
    return format(num, "g") if num != 0 else "0"
