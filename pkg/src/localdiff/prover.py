"""Interval certificates for the analytic inequalities behind the local bound.

With ``p = log_4 3``:

* ``f(x, g) = x^p + x^2p + g^p - (x+1)^p (x+g)^p``, and ``f0(x) = f(x, 0)``,
  ``f1(x) = f(x, 1)``;
* ``f1 >= 0`` on [1/10, 10] is certified by adaptive bisection away from
  ``x = 1`` and, on [3/5, 2], by a second-order Taylor bound whose remainder
  is controlled through an interval bound on ``|f1'''|``;
* the reduction to [1/10, 10] rests on ``1 + 10^p > 12^p`` plus the strict
  subadditivity ``a^p + b^p > (a+b)^p``;
* the integer inequality ``(ac)^p + (ad)^p + (bc)^p >= ((a+b)(c+d))^p`` is
  checked cell by cell on a grid.

Monotonicity arguments done by calculus (the sign of ``df/dg``, the growth
of ``f0``) are recorded as ``analytic_reduction`` boxes whose numeric
premises are interval-checked rather than re-derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .core import PowerSum, UndecidableError, p_interval, pow_p
from .interval import (
    Interval,
    escalation_schedule,
    format_endpoint,
    precision,
    to_float_bounds,
)

F1_DOMAIN = (Fraction(1, 10), Fraction(10))
TAYLOR_ZONE = (Fraction(3, 5), Fraction(2))
THIRD_DERIVATIVE_BOUND = Fraction(1, 10)
F0_DOMAIN = (Fraction(0), Fraction(10))
F0_ANALYTIC_EDGE = Fraction(1, 1000)
DEFAULT_MAX_DEPTH = 40
VALIDATION_PRECISION = 128

METHODS = ("interval_positive", "taylor_exclusion", "analytic_reduction")


class InconclusiveError(ArithmeticError):
    """Bisection reached its depth limit without deciding a box."""

    def __init__(self, message: str, boxes: list | None = None):
        super().__init__(message)
        self.boxes = boxes or []


# ---------------------------------------------------------------- functions


def _p() -> Interval:
    return p_interval()


def eval_f(x: Interval, gamma: Interval) -> Interval:
    x, gamma = Interval.coerce(x), Interval.coerce(gamma)
    p = _p()
    return x.power(p) + x.power(2 * p) + gamma.power(p) - (x + 1).power(p) * (x + gamma).power(p)


def f0(x: Interval) -> Interval:
    x = Interval.coerce(x)
    p = _p()
    return x.power(p) + x.power(2 * p) - (x * x + x).power(p)


def f0_prime(x: Interval) -> Interval:
    x = Interval.coerce(x)
    p = _p()
    return p * x.power(p - 1) + 2 * p * x.power(2 * p - 1) - p * (2 * x + 1) * (x * x + x).power(p - 1)


def f1(x: Interval) -> Interval:
    x = Interval.coerce(x)
    p = _p()
    return x.power(p) + x.power(2 * p) + 1 - (x + 1).power(2 * p)


def f1_prime(x: Interval) -> Interval:
    x = Interval.coerce(x)
    p = _p()
    return p * x.power(p - 1) + 2 * p * x.power(2 * p - 1) - 2 * p * (x + 1).power(2 * p - 1)


def f1_second(x: Interval) -> Interval:
    x = Interval.coerce(x)
    p = _p()
    q = 2 * p * (2 * p - 1)
    return p * (p - 1) * x.power(p - 2) + q * x.power(2 * p - 2) - q * (x + 1).power(2 * p - 2)


def f1_third(x: Interval) -> Interval:
    x = Interval.coerce(x)
    p = _p()
    inner = (p - 2) * x.power(p - 3) + 4 * (2 * p - 1) * (x.power(2 * p - 3) - (x + 1).power(2 * p - 3))
    return p * (p - 1) * inner


def gamma_ratio(x: Interval) -> Interval:
    """``r = (1 + x)^(p / (p - 1))``, the ratio controlling the sign of df/dgamma."""
    x = Interval.coerce(x)
    p = _p()
    return (x + 1).power(p / (p - 1))


def taylor_coefficient() -> Interval:
    """``f1''(1) / 2 = p^2 - 3p/4``."""
    p = _p()
    return p * p - 3 * p / 4


def _taylor_margin(lo: Fraction, hi: Fraction) -> Interval:
    """Lower-bounds ``c2 - (M/6)|x - 1|`` over the box; positive means f1 > 0 there (x != 1)."""
    reach = max(abs(lo - 1), abs(hi - 1))
    return taylor_coefficient() - Interval(THIRD_DERIVATIVE_BOUND / 6 * reach)


# ---------------------------------------------------------------- certificates


@dataclass
class Box:
    lo: Fraction
    hi: Fraction
    method: str
    lb: str
    extra: dict[str, str] = field(default_factory=dict)

    def to_line(self) -> str:
        tail = "".join(f" {k}={v}" for k, v in sorted(self.extra.items()))
        return f"[{_frac(self.lo)},{_frac(self.hi)}] method={self.method} lb={self.lb}{tail}"


@dataclass
class Premise:
    """A numeric fact the certificate leans on, with its interval evidence."""

    name: str
    holds: bool
    detail: dict[str, str] = field(default_factory=dict)

    def to_line(self) -> str:
        tail = "".join(f" {k}={v}" for k, v in self.detail.items())
        return f"premise {self.name} holds={'true' if self.holds else 'false'}{tail}"


@dataclass
class Certificate:
    claim_id: str
    domain: tuple[Fraction, Fraction] | None
    boxes: list[Box]
    premises: list[Premise]
    max_depth: int
    status: str
    params: dict[str, str] = field(default_factory=dict)
    failed: list[Box] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "verified"

    def gaps(self) -> list[tuple[Fraction, Fraction]]:
        """Uncovered stretches of the domain (empty when the boxes tile it)."""
        if self.domain is None:
            return []
        lo, hi = self.domain
        gaps = []
        cursor = lo
        for box in sorted(self.boxes, key=lambda b: (b.lo, b.hi)):
            if box.lo > cursor:
                gaps.append((cursor, box.lo))
            cursor = max(cursor, box.hi)
        if cursor < hi:
            gaps.append((cursor, hi))
        return gaps

    def to_text(self) -> str:
        lines = [
            "# localdiff certificate",
            f"claim: {self.claim_id}",
            f"status: {self.status}",
            "domain: " + ("none" if self.domain is None else f"[{_frac(self.domain[0])},{_frac(self.domain[1])}]"),
            f"max_depth: {self.max_depth}",
        ]
        lines += [f"param {k}={v}" for k, v in sorted(self.params.items())]
        lines += [p.to_line() for p in self.premises]
        lines += [b.to_line() for b in sorted(self.boxes, key=lambda b: b.lo)]
        lines += ["failed " + b.to_line() for b in self.failed]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Certificate":
        header: dict[str, str] = {}
        params: dict[str, str] = {}
        premises: list[Premise] = []
        boxes: list[Box] = []
        failed: list[Box] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("["):
                boxes.append(_parse_box(line))
            elif line.startswith("failed "):
                failed.append(_parse_box(line[len("failed "):]))
            elif line.startswith("premise "):
                name, *tokens = line[len("premise "):].split()
                kv = dict(t.split("=", 1) for t in tokens)
                holds = kv.pop("holds") == "true"
                premises.append(Premise(name, holds, kv))
            elif line.startswith("param "):
                k, v = line[len("param "):].split("=", 1)
                params[k] = v
            elif ":" in line:
                k, v = line.split(":", 1)
                header[k.strip()] = v.strip()
            else:
                raise ValueError(f"unrecognised certificate line: {raw!r}")
        for key in ("claim", "status", "domain", "max_depth"):
            if key not in header:
                raise ValueError(f"certificate is missing the {key!r} header")
        domain = None if header["domain"] == "none" else _parse_range(header["domain"])
        return cls(header["claim"], domain, boxes, premises, int(header["max_depth"]),
                   header["status"], params, failed)


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_range(text: str) -> tuple[Fraction, Fraction]:
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"bad range {text!r}")
    lo, hi = text[1:-1].split(",")
    return Fraction(lo), Fraction(hi)


def _parse_box(line: str) -> Box:
    rng, *tokens = line.split()
    lo, hi = _parse_range(rng)
    kv = dict(t.split("=", 1) for t in tokens)
    method = kv.pop("method")
    if method not in METHODS:
        raise ValueError(f"unknown box method {method!r}")
    return Box(lo, hi, method, kv.pop("lb"), kv)


def _lb_text(iv: Interval) -> str:
    return format_endpoint(iv, 12)[0]


def _interval_premise(name: str, iv: Interval, holds: bool) -> Premise:
    lo, hi = format_endpoint(iv, 20)
    return Premise(name, holds, {"lo": lo, "hi": hi})


# ---------------------------------------------------------------- bisection


def _evaluate_escalating(fn: Callable[[Interval], Interval], lo: Fraction, hi: Fraction,
                         accept: Callable[[Interval], bool]) -> Interval | None:
    for bits in escalation_schedule(start=128):
        with precision(bits):
            value = fn(Interval(lo, hi))
        if accept(value):
            return value
    return None


def cover(
    fn: Callable[[Interval], Interval],
    lo: Fraction,
    hi: Fraction,
    method: str = "interval_positive",
    accept: Callable[[Interval], bool] = Interval.is_positive,
    lb: Callable[[Interval, Fraction, Fraction], Interval] | None = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> tuple[list[Box], list[Box], int]:
    """Bisect ``[lo, hi]`` until ``accept(fn(box))`` holds on every box.

    Returns ``(boxes, failed, deepest)``. A box still undecided at
    ``max_depth`` is retried at escalating precision before being reported
    as failed.
    """
    done: list[Box] = []
    failed: list[Box] = []
    deepest = 0
    stack = [(lo, hi, 0)]
    while stack:
        a, b, depth = stack.pop()
        deepest = max(deepest, depth)
        value = fn(Interval(a, b))
        if not accept(value) and depth >= max_depth:
            value = _evaluate_escalating(fn, a, b, accept)
            if value is None:
                failed.append(Box(a, b, method, "nan"))
                continue
        if accept(value):
            shown = lb(value, a, b) if lb is not None else value
            done.append(Box(a, b, method, _lb_text(shown)))
            continue
        m = (a + b) / 2
        stack.append((m, b, depth + 1))
        stack.append((a, m, depth + 1))
    done.sort(key=lambda bx: bx.lo)
    return done, failed, deepest


def _status(boxes_failed: list, premises: Iterable[Premise]) -> str:
    return "verified" if not boxes_failed and all(p.holds for p in premises) else "failed"


# ---------------------------------------------------------------- claims


def check_subadditivity(a: Interval, b: Interval, max_depth: int = DEFAULT_MAX_DEPTH) -> bool:
    """Prove ``a^p + b^p > (a+b)^p`` for every point of the box ``a x b``.

    Boxes are bisected along their wider side until the interval lower bound
    of the left side clears the upper bound of the right side. Returns True
    on success and raises :class:`InconclusiveError` otherwise; it never
    claims the inequality is false.
    """
    a, b = Interval.coerce(a), Interval.coerce(b)
    if not (a.is_positive() and b.is_positive()):
        raise ValueError("check_subadditivity needs strictly positive inputs")
    stack = [(a, b, 0)]
    while stack:
        x, y, depth = stack.pop()
        if _subadditivity_gap(x, y).is_positive():
            continue
        if depth >= max_depth:
            raise InconclusiveError(f"subadditivity undecided on a={x!r}, b={y!r}")
        if x.width >= y.width:
            x1, x2 = x.split()
            stack += [(x1, y, depth + 1), (x2, y, depth + 1)]
        else:
            y1, y2 = y.split()
            stack += [(x, y1, depth + 1), (x, y2, depth + 1)]
    return True


def _subadditivity_gap(a: Interval, b: Interval) -> Interval:
    p = _p()
    return a.power(p) + b.power(p) - (a + b).power(p)


def certify_subadditivity(a: Fraction = Fraction(1), b_lo: Fraction = Fraction(1, 10**6),
                          b_hi: Fraction = Fraction(1), max_depth: int = DEFAULT_MAX_DEPTH) -> Certificate:
    """Certificate for ``a^p + b^p > (a+b)^p`` with ``a`` fixed and ``b`` over a range."""
    a = Fraction(a)
    boxes, failed, deepest = cover(
        lambda bx: _subadditivity_gap(Interval(a), bx), Fraction(b_lo), Fraction(b_hi),
        max_depth=max_depth,
    )
    with precision(96):
        p = _p()
        two = Interval(2) - Interval(2).power(p)
        four = 2 * Interval(4).power(p) - Interval(8).power(p)
    premises = [
        _interval_premise("2-2^p", two, two.is_positive()),
        _interval_premise("2*4^p-8^p", four, four.is_positive()),
    ]
    return Certificate("subadditivity", (Fraction(b_lo), Fraction(b_hi)), boxes, premises,
                       deepest, _status(failed, premises), {"a": _frac(a)}, failed)


def certify_gamma_reduction(max_depth: int = DEFAULT_MAX_DEPTH) -> Certificate:
    """Interval-check ``0 < r(x) < 1`` over [1/10, 10] for ``r = (1+x)^(p/(p-1))``.

    Given that, ``f(x, .)`` rises then falls in gamma, so only gamma = 0 and
    gamma = 1 need checking; that monotonicity step is the recorded
    analytic reduction.
    """
    def inside_unit(r: Interval) -> bool:
        return r.is_positive() and (1 - r).is_positive()

    boxes, failed, deepest = cover(
        gamma_ratio, *F1_DOMAIN, method="analytic_reduction", accept=inside_unit,
        lb=lambda r, a, b: Interval(min(r.lo, (1 - r).lo)), max_depth=max_depth,
    )
    with precision(96):
        p = _p()
        pm1 = p - 1
        ratio = p / pm1
    premises = [
        _interval_premise("p-1<0", pm1, pm1.is_negative()),
        _interval_premise("p/(p-1)<0", ratio, ratio.is_negative()),
    ]
    return Certificate("gamma-reduction", F1_DOMAIN, boxes, premises, deepest,
                       _status(failed, premises), {}, failed)


def certify_f0_nonneg(max_depth: int = DEFAULT_MAX_DEPTH) -> Certificate:
    """``f0 >= 0`` on [0, 10].

    ``f0' > 0`` on [1/1000, 10] by bisection plus ``f0(1/1000) > 0``; below
    1/1000 the bound ``f0(x) >= x^(1+p) (1-p)`` needs only ``p < 1``.
    """
    boxes, failed, deepest = cover(f0_prime, F0_ANALYTIC_EDGE, F0_DOMAIN[1], max_depth=max_depth)
    # on (0, 1]: f0 = x^p (1 + x^p - (1+x)^p) >= x^p * x(1-p), using (1+x)^p <= 1 + px and x^p >= x
    boxes.insert(0, Box(F0_DOMAIN[0], F0_ANALYTIC_EDGE, "analytic_reduction", "0",
                        {"reason": "f0>=x^(1+p)(1-p)"}))
    premises = _f0_premises()
    return Certificate("f0", F0_DOMAIN, boxes, premises, deepest, _status(failed, premises), {}, failed)


def _f0_premises() -> list[Premise]:
    with precision(96):
        p = _p()
        pm1 = p - 1
        edge = f0(Interval(F0_ANALYTIC_EDGE))
        at_one = f0(Interval(1))
        d_one = f0_prime(Interval(1))
    return [
        _interval_premise("p-1<0", pm1, pm1.is_negative()),
        Premise("f0(0)=0", True, {"reason": "0^p=0"}),
        _interval_premise("f0(1/1000)>0", edge, edge.is_positive()),
        _interval_premise("f0(1)>0", at_one, at_one.is_positive()),
        _interval_premise("f0'(1)>0", d_one, d_one.is_positive()),
    ]


def _f1_premises(third_max: Interval | None) -> list[Premise]:
    with precision(96):
        p = _p()
        value = f1(Interval(1))
        slope = f1_prime(Interval(1))
        curvature = f1_second(Interval(1))
        closed = 2 * p * p - 3 * p / 2
        coef = taylor_coefficient()
    # f1(1) = 3 - 4^p and f1'(1) = 3p - p*4^p vanish exactly because 4^p = 3
    exact_zero = (PowerSum.integer(3) - PowerSum.power(4)).sign() == 0
    overlap = not (curvature.certainly_lt(closed) or curvature.certainly_gt(closed))
    premises = [
        Premise("4^p=3", exact_zero, {"reason": "p=log_4(3)"}),
        _interval_premise("f1(1)=0", value, exact_zero and value.contains(0)),
        _interval_premise("f1'(1)=0", slope, exact_zero and slope.contains(0)),
        _interval_premise("f1''(1)=2p^2-3p/2", curvature, overlap and curvature.is_positive()),
        _interval_premise("taylor_coefficient=p^2-3p/4", coef, coef.is_positive()),
    ]
    if third_max is not None:
        lo, hi = format_endpoint(third_max, 20)
        premises.append(Premise("|f1'''|<1/10_on_[3/5,2]",
                                third_max.certainly_lt(Interval(THIRD_DERIVATIVE_BOUND)),
                                {"max_hi": hi}))
    return premises


def _taylor_boxes(max_depth: int) -> tuple[list[Box], list[Box], int, Interval]:
    bound = Interval(THIRD_DERIVATIVE_BOUND)

    def ok(third: Interval) -> bool:
        return abs(third).certainly_lt(bound)

    boxes, failed, deepest = cover(f1_third, *TAYLOR_ZONE, method="taylor_exclusion",
                                   accept=ok, max_depth=max_depth)
    worst = Interval(0)
    for box in boxes:
        third = abs(f1_third(Interval(box.lo, box.hi)))
        worst = worst.hull(third)
        margin = _taylor_margin(box.lo, box.hi)
        box.lb = _lb_text(margin)
        box.extra["f3_max"] = format_endpoint(third, 12)[1]
        if not margin.is_positive():
            failed.append(box)
    boxes = [b for b in boxes if b not in failed]
    return boxes, failed, deepest, Interval(0, worst.hi)


def certify_f1_nonneg(max_depth: int = DEFAULT_MAX_DEPTH) -> Certificate:
    """``f1 >= 0`` on [1/10, 10], with equality only at ``x = 1``."""
    left, left_failed, d1 = cover(f1, F1_DOMAIN[0], TAYLOR_ZONE[0], max_depth=max_depth)
    middle, mid_failed, d2, third_max = _taylor_boxes(max_depth)
    right, right_failed, d3 = cover(f1, TAYLOR_ZONE[1], F1_DOMAIN[1], max_depth=max_depth)
    premises = _f1_premises(third_max)
    failed = left_failed + mid_failed + right_failed
    return Certificate("f1", F1_DOMAIN, left + middle + right, premises, max(d1, d2, d3),
                       _status(failed, premises), {}, failed)


def domain_reduction_margin() -> Interval:
    """``1 + 10^p - 12^p``; positive means large ratios never need a root search."""
    p = _p()
    return 1 + Interval(10).power(p) - Interval(12).power(p)


def certify_domain_reduction() -> Certificate:
    with precision(96):
        margin = domain_reduction_margin()
        p = _p()
        # x <= 1/10 swaps the roles of (c, d) and (a, b): the same numbers appear
        swapped = 1 + Interval(10).power(p) - Interval(12).power(p)
    sub_ok = check_subadditivity(Interval(1), Interval(1))
    premises = [
        _interval_premise("1+10^p>12^p", margin, margin.is_positive()),
        _interval_premise("symmetric_case_1+10^p>12^p", swapped, swapped.is_positive()),
        Premise("(ac)^p+(bc)^p>(ac+bc)^p_at_ac=bc=1", sub_ok, {"method": "check_subadditivity"}),
    ]
    return Certificate("domain-reduction", None, [], premises, 0, _status([], premises),
                       {"margin_lo": format_endpoint(margin, 12)[0],
                        "margin_hi": format_endpoint(margin, 12)[1]})


# ---------------------------------------------------------------- integer grid


def tight_inequality_gap(a: int, b: int, c: int, d: int) -> PowerSum:
    """``(ac)^p + (ad)^p + (bc)^p - ((a+b)(c+d))^p`` in exact normal form."""
    return (PowerSum.power(a * c) + PowerSum.power(a * d) + PowerSum.power(b * c)
            - PowerSum.power((a + b) * (c + d)))


def tight_inequality_holds(a: int, b: int, c: int, d: int) -> bool:
    return tight_inequality_gap(a, b, c, d).sign() >= 0


@dataclass
class GridReport:
    max_val: int
    cells: int
    admissible: int
    float_certified: int
    exact_resolved: int
    equalities: int
    violations: list[tuple[int, int, int, int]]
    min_relative_margin: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [
            f"max_val={self.max_val}",
            f"cells={self.cells}",
            f"admissible={self.admissible}",
            f"float_certified={self.float_certified}",
            f"exact_resolved={self.exact_resolved}",
            f"equalities={self.equalities}",
            f"violations={len(self.violations)}",
            f"min_relative_margin={self.min_relative_margin:.6g}",
        ]


def _power_table(limit: int) -> tuple[np.ndarray, np.ndarray]:
    lo = np.empty(limit + 1)
    hi = np.empty(limit + 1)
    with precision(96):
        for n in range(limit + 1):
            lo[n], hi[n] = to_float_bounds(pow_p(n))
    return lo, hi


def _down(x: np.ndarray) -> np.ndarray:
    return np.nextafter(x, -np.inf)


def _up(x: np.ndarray) -> np.ndarray:
    return np.nextafter(x, np.inf)


def check_tight_inequality_grid(max_val: int, include_degenerate: bool = False) -> GridReport:
    """Check ``(ac)^p + (ad)^p + (bc)^p >= ((a+b)(c+d))^p`` for all 0 <= a,b,c,d <= max_val.

    Admissible cells have ``a + b >= 1``, ``c + d >= 1``, ``ac >= bd`` and at
    most one zero (the cases with two zeros follow from the induction
    directly; ``include_degenerate`` checks them anyway). Every ``N^p`` comes
    from a table of outward-rounded double enclosures, cell sums are rounded
    outward with ``nextafter``, and cells the doubles cannot separate
    (including the exact equality ``a = b, c = d``) fall back to the exact
    normal form.
    """
    if max_val < 1:
        raise ValueError("max_val must be at least 1")
    lo_t, hi_t = _power_table((2 * max_val) ** 2)
    r = np.arange(max_val + 1)
    a, b, c, d = (g.ravel() for g in np.meshgrid(r, r, r, r, indexing="ij"))
    keep = (a + b >= 1) & (c + d >= 1) & (a * c >= b * d)
    if not include_degenerate:
        zeros = (a == 0).astype(int) + (b == 0) + (c == 0) + (d == 0)
        keep &= zeros <= 1
    a, b, c, d = a[keep], b[keep], c[keep], d[keep]
    ac, ad, bc, full = a * c, a * d, b * c, (a + b) * (c + d)
    lhs_lo = _down(_down(lo_t[ac] + lo_t[ad]) + lo_t[bc])
    lhs_hi = _up(_up(hi_t[ac] + hi_t[ad]) + hi_t[bc])
    certified = lhs_lo >= hi_t[full]
    refuted = lhs_hi < lo_t[full]
    margin = (lhs_lo - hi_t[full]) / hi_t[full]

    violations = [tuple(int(v) for v in cell) for cell in zip(a[refuted], b[refuted], c[refuted], d[refuted])]
    exact, equalities = 0, 0
    for cell in zip(*(x[~certified & ~refuted] for x in (a, b, c, d))):
        cell = tuple(int(v) for v in cell)
        try:
            sign = tight_inequality_gap(*cell).sign()
        except UndecidableError as exc:
            raise InconclusiveError(f"grid cell {cell} undecided at the precision cap") from exc
        exact += 1
        if sign == 0:
            equalities += 1
        elif sign < 0:
            violations.append(cell)
    positive = margin[certified]
    return GridReport(
        max_val=max_val,
        cells=(max_val + 1) ** 4,
        admissible=int(keep.sum()),
        float_certified=int(certified.sum()),
        exact_resolved=exact,
        equalities=equalities,
        violations=violations,
        min_relative_margin=float(positive.min()) if positive.size else math.nan,
    )


def certify_tight_grid(max_val: int = 30) -> Certificate:
    report = check_tight_inequality_grid(max_val)
    premises = [
        Premise("no_violations", report.ok, {"violations": str(len(report.violations))}),
        Premise("admissible_cells_checked", report.admissible == report.float_certified + report.exact_resolved,
                {"admissible": str(report.admissible), "float": str(report.float_certified),
                 "exact": str(report.exact_resolved), "equalities": str(report.equalities)}),
    ]
    return Certificate("tight-grid", None, [], premises, 0, _status([], premises),
                       {"max_val": str(max_val)})


# ---------------------------------------------------------------- validation


@dataclass
class ValidationResult:
    ok: bool
    problems: list[str]


def _recheck_box(claim: str, box: Box, params: dict[str, str]) -> str | None:
    x = Interval(box.lo, box.hi)
    if claim == "f1" and box.method == "interval_positive":
        return None if f1(x).is_positive() else "f1 not positive"
    if claim == "f1" and box.method == "taylor_exclusion":
        if box.lo < TAYLOR_ZONE[0] or box.hi > TAYLOR_ZONE[1]:
            return "Taylor box outside [3/5, 2]"
        if not abs(f1_third(x)).certainly_lt(Interval(THIRD_DERIVATIVE_BOUND)):
            return "|f1'''| bound fails"
        return None if _taylor_margin(box.lo, box.hi).is_positive() else "Taylor margin not positive"
    if claim == "f0" and box.method == "interval_positive":
        return None if f0_prime(x).is_positive() else "f0' not positive"
    if claim == "f0" and box.method == "analytic_reduction":
        if box.lo != 0 or box.hi > F0_ANALYTIC_EDGE:
            return "analytic box for f0 must be [0, 1/1000] or shorter"
        return None
    if claim == "gamma-reduction" and box.method == "analytic_reduction":
        r = gamma_ratio(x)
        return None if r.is_positive() and (1 - r).is_positive() else "r not inside (0, 1)"
    if claim == "subadditivity" and box.method == "interval_positive":
        a = Fraction(params.get("a", "1"))
        return None if _subadditivity_gap(Interval(a), x).is_positive() else "gap not positive"
    return f"method {box.method} not valid for claim {claim}"


def _expected_premises(cert: Certificate) -> list[Premise]:
    if cert.claim_id == "f1":
        return _f1_premises(None)
    if cert.claim_id == "f0":
        return _f0_premises()
    if cert.claim_id == "domain-reduction":
        return certify_domain_reduction().premises
    if cert.claim_id == "tight-grid":
        return certify_tight_grid(int(cert.params.get("max_val", "30"))).premises
    return []


def validate_certificate(cert: Certificate, bits: int = VALIDATION_PRECISION) -> ValidationResult:
    """Independently re-check a (typically deserialised) certificate.

    Coverage is checked with exact rational endpoints; every box is
    re-evaluated at ``bits`` of precision; recomputable premises are
    recomputed. Recorded lower bounds are informational and not trusted.
    """
    problems: list[str] = []
    if cert.status != "verified":
        problems.append(f"status is {cert.status!r}")
    if cert.failed:
        problems.append(f"{len(cert.failed)} failed boxes recorded")
    for lo, hi in cert.gaps():
        problems.append(f"gap [{_frac(lo)}, {_frac(hi)}]")
    if cert.domain is not None and not cert.boxes:
        problems.append("no boxes")
    with precision(bits):
        for box in cert.boxes:
            if box.lo >= box.hi:
                problems.append(f"degenerate box {box.to_line()}")
                continue
            issue = _recheck_box(cert.claim_id, box, cert.params)
            if issue:
                problems.append(f"{box.to_line()}: {issue}")
    for premise in cert.premises:
        if not premise.holds:
            problems.append(f"premise {premise.name} recorded as failing")
    recorded = {p.name for p in cert.premises}
    for premise in _expected_premises(cert):
        if premise.name not in recorded:
            problems.append(f"premise {premise.name} missing")
        elif not premise.holds:
            problems.append(f"premise {premise.name} fails on recomputation")
    return ValidationResult(not problems, problems)


CLAIMS: dict[str, Callable[[], Certificate]] = {
    "subadditivity": certify_subadditivity,
    "f0": certify_f0_nonneg,
    "f1": certify_f1_nonneg,
    "gamma-reduction": certify_gamma_reduction,
    "domain-reduction": certify_domain_reduction,
    "tight-grid": certify_tight_grid,
}
