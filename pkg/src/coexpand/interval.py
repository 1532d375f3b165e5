"""Closed intervals with outward-rounded endpoint arithmetic.

Python exposes no directed-rounding mode, so every primitive computes its
endpoints in round-to-nearest and then widens them outward: one ulp per
side for the basic arithmetic operations (correctly rounded, so one step
always covers the true endpoint) and two ulps per side for the libm
transcendentals (faithfully rounded on every platform we target).  This
stays within the documented budget of at most 4 ulp of conservative
widening per primitive.

Additions and subtractions whose results are exact (detected with the
error-free 2Sum transform) and products/quotients by a power of two are
not widened, which keeps affine expressions bit-exact.

``erf`` is enclosed by widening ``math.erf`` two ulps per side.  With
|erf| <= 1 that inflates the enclosure by at most ~4.5e-16 in absolute
terms, inside the 1e-15 error budget this module guarantees for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainViolation

_INF = math.inf
_DBL_MIN = 2.2250738585072014e-308  # smallest normal double


def _next_down(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -_INF)
    return x


def _next_up(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, _INF)
    return x


def _add_exact(a: float, b: float, s: float) -> bool:
    # 2Sum error-free test; conservative (False negatives only widen).
    if not math.isfinite(s):
        return False
    bb = s - a
    return a == s - bb and b == bb


def _is_pow2(x: float) -> bool:
    if x == 0.0 or not math.isfinite(x):
        return False
    m, _ = math.frexp(x)
    return m == 0.5 or m == -0.5


def _mul_exact(a: float, b: float, p: float) -> bool:
    if a == 0.0 or b == 0.0:
        return True  # exact zero; keeps affine jets bit-exact
    if not (_is_pow2(a) or _is_pow2(b)):
        return False
    return math.isfinite(p) and abs(p) >= _DBL_MIN


def _raw_mul(a: float, b: float) -> float:
    p = a * b
    # 0 * inf at an endpoint means a vanishing limit: 0 is the endpoint.
    return 0.0 if math.isnan(p) else p


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval [lo, hi]; the empty set is Interval.empty()."""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi and not (self.lo == _INF and self.hi == -_INF):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v: float) -> Interval:
        return cls(v, v)

    @classmethod
    def empty(cls) -> Interval:
        return _EMPTY

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def width(self) -> float:
        if self.is_empty:
            return 0.0
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            if math.isinf(self.lo) and math.isinf(self.hi):
                return 0.0
            return self.lo if math.isinf(self.hi) else self.hi
        m = 0.5 * (self.lo + self.hi)
        if not math.isfinite(m):
            m = self.lo + 0.5 * (self.hi - self.lo)
        return m

    @property
    def mag(self) -> float:
        """max |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def __repr__(self) -> str:
        if self.is_empty:
            return "Interval(empty)"
        return f"[{self.lo!r}, {self.hi!r}]"

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    def contains_interval(self, other: Interval) -> bool:
        if other.is_empty:
            return True
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_inside(self, other: Interval) -> bool:
        """self lies in the interior of other."""
        if self.is_empty:
            return True
        return other.lo < self.lo and self.hi < other.hi

    def intersect(self, other: Interval) -> Interval:
        if self.is_empty or other.is_empty:
            return _EMPTY
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else _EMPTY

    def hull(self, other: Interval) -> Interval:
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def straddles_zero(self) -> bool:
        return not self.is_empty and self.lo <= 0.0 <= self.hi

    def widen(self, eps: float) -> Interval:
        if self.is_empty:
            return self
        return Interval(self.lo - eps, self.hi + eps)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other) -> Interval:
        other = _coerce(other)
        if self.is_empty or other.is_empty:
            return _EMPTY
        lo = self.lo + other.lo
        hi = self.hi + other.hi
        if math.isnan(lo):  # inf + -inf at an endpoint: no finite bound
            lo = -_INF
        elif not _add_exact(self.lo, other.lo, lo):
            lo = _next_down(lo)
        if math.isnan(hi):
            hi = _INF
        elif not _add_exact(self.hi, other.hi, hi):
            hi = _next_up(hi)
        return Interval(lo, hi)

    __radd__ = __add__

    def __sub__(self, other) -> Interval:
        other = _coerce(other)
        if self.is_empty or other.is_empty:
            return _EMPTY
        lo = self.lo - other.hi
        hi = self.hi - other.lo
        if math.isnan(lo):
            lo = -_INF
        elif not _add_exact(self.lo, -other.hi, lo):
            lo = _next_down(lo)
        if math.isnan(hi):
            hi = _INF
        elif not _add_exact(self.hi, -other.lo, hi):
            hi = _next_up(hi)
        return Interval(lo, hi)

    def __rsub__(self, other) -> Interval:
        return _coerce(other) - self

    def __neg__(self) -> Interval:
        if self.is_empty:
            return _EMPTY
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other) -> Interval:
        other = _coerce(other)
        if self.is_empty or other.is_empty:
            return _EMPTY
        cands = (
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        )
        lo = _INF
        hi = -_INF
        for a, b in cands:
            p = _raw_mul(a, b)
            plo = p if _mul_exact(a, b, p) else _next_down(p)
            phi = p if _mul_exact(a, b, p) else _next_up(p)
            if plo < lo:
                lo = plo
            if phi > hi:
                hi = phi
        return Interval(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Interval:
        other = _coerce(other)
        if self.is_empty or other.is_empty:
            return _EMPTY
        if other.straddles_zero():
            raise DomainViolation("division", other)
        cands = (
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        )
        lo = _INF
        hi = -_INF
        for a, b in cands:
            q = a / b
            if math.isnan(q):
                q = 0.0
            exact = a == 0.0 or (_is_pow2(b) and math.isfinite(q) and abs(q) >= _DBL_MIN)
            qlo = q if exact else _next_down(q)
            qhi = q if exact else _next_up(q)
            if qlo < lo:
                lo = qlo
            if qhi > hi:
                hi = qhi
        return Interval(lo, hi)

    def __rtruediv__(self, other) -> Interval:
        return _coerce(other) / self

    def pow_int(self, n: int) -> Interval:
        if self.is_empty:
            return _EMPTY
        if n == 0:
            return Interval(1.0, 1.0)
        if n < 0:
            if self.straddles_zero():
                raise DomainViolation("pow_int", self)
            return Interval(1.0, 1.0) / self.pow_int(-n)
        if n % 2 == 0:
            m = self.abs()
            out = _pow_chain(m, n)
            return Interval(max(0.0, out.lo), out.hi)
        return _pow_chain(self, n)

    def abs(self) -> Interval:
        if self.is_empty:
            return _EMPTY
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))


_EMPTY = Interval(_INF, -_INF)


def _coerce(v) -> Interval:
    if isinstance(v, Interval):
        return v
    if isinstance(v, (int, float)):
        return Interval(float(v), float(v))
    return NotImplemented


def _pow_chain(base: Interval, n: int) -> Interval:
    # Binary exponentiation over interval multiplication: every step is
    # outward rounded, so the chain is sound for any exponent.
    result = Interval(1.0, 1.0)
    acc = base
    while n:
        if n & 1:
            result = result * acc
        n >>= 1
        if n:
            acc = acc * acc
    return result


# ----------------------------------------------------------------------
# transcendental kernels
# ----------------------------------------------------------------------

_PI = Interval(_next_down(math.pi), _next_up(math.pi))
_HALF_PI = Interval(_next_down(math.pi / 2), _next_up(math.pi / 2))


def _monotone(fn, x: Interval, widen: int = 2,
              clamp_lo: float = -_INF, clamp_hi: float = _INF) -> Interval:
    lo = _next_down(fn(x.lo), widen)
    hi = _next_up(fn(x.hi), widen)
    return Interval(max(clamp_lo, lo), min(clamp_hi, hi))


def exp_i(x: Interval) -> Interval:
    def e(v: float) -> float:
        try:
            return math.exp(v)
        except OverflowError:
            return _INF
    lo = e(x.lo)
    hi = e(x.hi)
    lo = max(0.0, _next_down(lo, 2)) if math.isfinite(lo) else lo
    hi = _next_up(hi, 2) if math.isfinite(hi) else hi
    return Interval(lo, hi)


def log_i(x: Interval) -> Interval:
    if x.lo <= 0.0:
        raise DomainViolation("log", x)
    return Interval(_next_down(math.log(x.lo), 2), _next_up(math.log(x.hi), 2))


def sqrt_i(x: Interval) -> Interval:
    if x.lo < 0.0:
        raise DomainViolation("sqrt", x)
    return Interval(max(0.0, _next_down(math.sqrt(x.lo))), _next_up(math.sqrt(x.hi)))


def tanh_i(x: Interval) -> Interval:
    return _monotone(math.tanh, x, clamp_lo=-1.0, clamp_hi=1.0)


def atan_i(x: Interval) -> Interval:
    return _monotone(math.atan, x)


def erf_i(x: Interval) -> Interval:
    return _monotone(math.erf, x, clamp_lo=-1.0, clamp_hi=1.0)


def _cosh(v: float) -> float:
    try:
        return math.cosh(v)
    except OverflowError:
        return _INF


def sech2_i(x: Interval) -> Interval:
    """Enclosure of 1/cosh(x)^2, avoiding the 1 - tanh^2 cancellation."""
    m = x.abs()
    ch_lo = _next_down(_cosh(m.lo), 2)
    ch_hi = _cosh(m.hi)
    ch_hi = _next_up(ch_hi, 2) if math.isfinite(ch_hi) else ch_hi
    hi = _next_up((1.0 / ch_lo) ** 2, 2)
    lo = 0.0 if math.isinf(ch_hi) else max(0.0, _next_down((1.0 / ch_hi) ** 2, 2))
    return Interval(lo, min(1.0, hi))


def _trig_extrema(x: Interval, phase: Interval) -> bool:
    """Does x (conservatively) contain a point phase + 2*pi*k?"""
    two_pi = _PI * 2.0
    k_lo = math.floor((x.lo - phase.hi) / two_pi.lo) if math.isfinite(x.lo) else None
    if k_lo is None or not math.isfinite(x.hi):
        return True
    for k in (k_lo, k_lo + 1, k_lo + 2):
        p = phase + two_pi * float(k)
        if p.hi >= x.lo and p.lo <= x.hi:
            return True
    return False


def sin_i(x: Interval) -> Interval:
    if x.width >= 2.0 * math.pi:
        return Interval(-1.0, 1.0)
    lo = min(math.sin(x.lo), math.sin(x.hi))
    hi = max(math.sin(x.lo), math.sin(x.hi))
    lo = _next_down(lo, 2)
    hi = _next_up(hi, 2)
    if _trig_extrema(x, _HALF_PI):
        hi = 1.0
    if _trig_extrema(x, -_HALF_PI):
        lo = -1.0
    return Interval(max(-1.0, lo), min(1.0, hi))


def cos_i(x: Interval) -> Interval:
    if x.width >= 2.0 * math.pi:
        return Interval(-1.0, 1.0)
    lo = min(math.cos(x.lo), math.cos(x.hi))
    hi = max(math.cos(x.lo), math.cos(x.hi))
    lo = _next_down(lo, 2)
    hi = _next_up(hi, 2)
    if _trig_extrema(x, Interval.point(0.0)):
        hi = 1.0
    if _trig_extrema(x, _PI):
        lo = -1.0
    return Interval(max(-1.0, lo), min(1.0, hi))


TWO_OVER_SQRT_PI = Interval(2.0, 2.0) / sqrt_i(_PI)


# ----------------------------------------------------------------------
# boxes
# ----------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Box2:
    """Axis-aligned box in the (x, y) pair plane; both sides non-empty."""

    x: Interval
    y: Interval

    def __post_init__(self):
        if self.x.is_empty or self.y.is_empty:
            raise ValueError("Box2 sides must be non-empty")

    def __repr__(self) -> str:
        return f"Box2({self.x!r}, {self.y!r})"


def split(b: Box2) -> tuple[Box2, Box2]:
    """Bisect the wider dimension at its midpoint (x on ties)."""
    if b.x.width >= b.y.width:
        m = b.x.mid
        return Box2(Interval(b.x.lo, m), b.y), Box2(Interval(m, b.x.hi), b.y)
    m = b.y.mid
    return Box2(b.x, Interval(b.y.lo, m)), Box2(b.x, Interval(m, b.y.hi))
