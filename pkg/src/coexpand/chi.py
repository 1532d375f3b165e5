"""The coexpansion functional chi, its dediagonalised form U, and S.

For a C1 function f and distinct points x, y in one component of the
domain minus the critical set::

    chi(x, y) = f'(x) f'(y) ((x - y) / (f(x) - f(y)))^2

A pair with chi > 1 is coexpanding; a function with no such pair on any
component is a member of the analysed class.  ``U = (chi - 1)/(x - y)^2``
extends smoothly to the diagonal with limit S/6, where S is the
Schwarzian derivative -- that limit is what makes near-diagonal
certification possible through S instead of chi boxes.

:func:`chi_box` computes an interval enclosure of chi over a box as the
intersection of three independently sound forms (direct quotient, mean
value slope form, and a Taylor-at-midpoint form).  The Taylor form is the
one that stays useful close to the diagonal, where the other two
inevitably straddle 1.
"""

from __future__ import annotations

import math

from .errors import CriticalPoint, DiagonalInput, DomainViolation, PreconditionUnmet, SeamPoint, ValueCollision
from .expr import FunctionExpr
from .interval import Box2, Interval
from .jets import jet_eval

_ULP_COLLISION = 4


def chi(f: FunctionExpr, x: float, y: float) -> float:
    """Point value of the coexpansion functional."""
    if x == y:
        raise DiagonalInput(f"chi is undefined on the diagonal (x = y = {x})")
    fx = jet_eval(f, x)
    fy = jet_eval(f, y)
    if abs(fx.v - fy.v) <= _ULP_COLLISION * math.ulp(max(abs(fx.v), abs(fy.v))):
        raise ValueCollision(f"f({x}) and f({y}) agree to within rounding")
    ratio = (x - y) / (fx.v - fy.v)
    return fx.d1 * fy.d1 * ratio * ratio


def u_f(f: FunctionExpr, x: float, y: float) -> float:
    """(chi - 1) / (x - y)^2, the mixed partial of log |(f(x)-f(y))/(x-y)|."""
    return (chi(f, x, y) - 1.0) / ((x - y) * (x - y))


def schwarzian(f: FunctionExpr, x: float | Interval) -> float | Interval:
    """S_f(x) = f'''/f' - 3/2 (f''/f')^2, point value or enclosure.

    Raises :class:`CriticalPoint` when f' vanishes (or may vanish, for an
    interval argument) and :class:`SeamPoint` at a glue seam, where f is
    only C1 and S does not exist.
    """
    j = jet_eval(f, x)
    if j.seam:
        raise SeamPoint(f"Schwarzian undefined at a glue seam (x = {x})")
    if isinstance(x, Interval):
        if j.d1.straddles_zero():
            raise CriticalPoint(f"f' may vanish on {x}")
        q = j.d2 / j.d1
        return j.d3 / j.d1 - q.pow_int(2) * 1.5
    if j.d1 == 0.0:
        raise CriticalPoint(f"f'({x}) = 0")
    q = j.d2 / j.d1
    return j.d3 / j.d1 - 1.5 * q * q


def schwarzian_enclosure(f: FunctionExpr, x: Interval) -> Interval | None:
    """Like :func:`schwarzian` over an interval, but None instead of raising."""
    try:
        return schwarzian(f, x)  # type: ignore[return-value]
    except (CriticalPoint, SeamPoint, DomainViolation):
        return None


def chi_point_enclosure(f: FunctionExpr, x: float, y: float) -> Interval | None:
    """Rigorous enclosure of chi at a concrete pair via degenerate intervals.

    Returns None when the evaluation is undefined there (value collision,
    domain violation).  This is the form falsification witnesses rely on.
    """
    try:
        jx = jet_eval(f, Interval.point(x))
        jy = jet_eval(f, Interval.point(y))
        diff = jx.v - jy.v
        if diff.straddles_zero():
            return None
        ratio = (Interval.point(x) - Interval.point(y)) / diff
        return jx.d1 * jy.d1 * ratio.pow_int(2)
    except DomainViolation:
        return None


def _chi_direct(jx, jy, bx: Interval, by: Interval) -> Interval | None:
    diff = jx.v - jy.v
    if diff.straddles_zero():
        return None
    ratio = (bx - by) / diff
    return jx.d1 * jy.d1 * ratio.pow_int(2)


def _chi_slope(f: FunctionExpr, jx, jy, hullxy: Interval) -> Interval | None:
    # (f(x)-f(y))/(x-y) = f'(xi) for some xi in the hull (mean value).
    jh = jet_eval(f, hullxy)
    if jh.d1.straddles_zero():
        return None
    return jx.d1 * jy.d1 * (1.0 / jh.d1).pow_int(2)


def _chi_taylor(f: FunctionExpr, bx: Interval, by: Interval, hullxy: Interval) -> Interval | None:
    # With m = (x+y)/2, h = (x-y)/2 and xi ranging over the hull:
    #   f'(x) f'(y)  in  (P + hQ + h^2/2 R)(P - hQ + h^2/2 R)
    #   (x-y)/(f(x)-f(y))  in  1/(P + h^2/6 R)
    # where P = f'(m), Q = f''(m) over the midpoint range and R = f'''
    # over the hull.  Requires f to be C3 on the hull (no seam).
    jh = jet_eval(f, hullxy)
    if jh.seam:
        return None
    mid = (bx + by) * 0.5
    h = (bx - by) * 0.5
    jm = jet_eval(f, mid)
    if jm.seam:
        return None
    p, q = jm.d1, jm.d2
    r = jh.d3
    h2 = h.pow_int(2)
    a = p + h * q + h2 * 0.5 * r
    b = p - h * q + h2 * 0.5 * r
    g = p + h2 * r / 6.0
    if g.straddles_zero():
        return None
    return (a * b) * (1.0 / g).pow_int(2)


def chi_box(f: FunctionExpr, b: Box2) -> Interval | None:
    """Enclosure of chi over a box with disjoint sides, or None.

    Intersection of every applicable form; each form is individually an
    enclosure of the range, so the intersection is too.  None means no
    form applied (e.g. the function is not evaluable over the box).
    """
    out: Interval | None = None
    hullxy = b.x.hull(b.y)
    try:
        jx = jet_eval(f, b.x)
        jy = jet_eval(f, b.y)
    except DomainViolation:
        return None
    for form in (
        lambda: _chi_direct(jx, jy, b.x, b.y),
        lambda: _chi_slope(f, jx, jy, hullxy),
        lambda: _chi_taylor(f, b.x, b.y, hullxy),
    ):
        try:
            enc = form()
        except DomainViolation:
            enc = None
        if enc is None:
            continue
        if out is None:
            out = enc
        else:
            tighter = out.intersect(enc)
            # An empty intersection of two sound enclosures is impossible;
            # if rounding ever produces one, the hull is still sound.
            out = out.hull(enc) if tighter.is_empty else tighter
    return out


def chi_interval(f: FunctionExpr, b: Box2) -> Interval:
    """Public enclosure of chi over a box; sides must be disjoint."""
    if not b.x.intersect(b.y).is_empty:
        raise PreconditionUnmet("chi_interval requires disjoint box sides")
    enc = chi_box(f, b)
    if enc is None:
        raise DomainViolation("chi", b)
    return enc
