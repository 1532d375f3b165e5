"""Evaluation of expression trees: plain values, range enclosures, jets.

Three evaluators share the tree-walking structure:

* :func:`eval_point`     -- fast float evaluation,
* :func:`interval_eval`  -- rigorous range enclosure,
* :func:`jet_eval`       -- value plus derivatives of order 1..3, over a
  float (point jet) or an :class:`~coexpand.interval.Interval` (enclosing
  jet).

At a glue seam the represented function is only C1, so point jets taken
exactly on the seam and interval jets straddling it carry ``seam=True``:
orders 0 and 1 are valid (both branches agree there), orders 2 and 3 are
one-sided values or hulls of the two one-sided values.  Analysis code
treats seam-flagged jets like component boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainViolation
from .expr import (
    Add,
    Apply,
    Constant,
    Div,
    FunctionExpr,
    Glue,
    Mul,
    Neg,
    PowInt,
    Sub,
    Variable,
)
from .interval import (
    TWO_OVER_SQRT_PI,
    Interval,
    atan_i,
    cos_i,
    erf_i,
    exp_i,
    log_i,
    sech2_i,
    sin_i,
    sqrt_i,
    tanh_i,
)

Scalar = float | Interval

_TWO_OVER_SQRT_PI_F = 2.0 / math.sqrt(math.pi)


@dataclass(frozen=True, slots=True)
class Jet3:
    """Value and derivatives of order 1..3; generic over float/Interval."""

    v: Scalar
    d1: Scalar
    d2: Scalar
    d3: Scalar
    seam: bool = False

    def as_tuple(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.v, self.d1, self.d2, self.d3)


def _zero_like(x: Scalar) -> Scalar:
    return Interval.point(0.0) if isinstance(x, Interval) else 0.0


def _sq(x: Scalar) -> Scalar:
    return x.pow_int(2) if isinstance(x, Interval) else x * x


# ----------------------------------------------------------------------
# jet combinators (raw derivatives, not Taylor coefficients)
# ----------------------------------------------------------------------


def _jadd(a: Jet3, b: Jet3) -> Jet3:
    return Jet3(a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3, a.seam or b.seam)


def _jsub(a: Jet3, b: Jet3) -> Jet3:
    return Jet3(a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3, a.seam or b.seam)


def _jneg(a: Jet3) -> Jet3:
    return Jet3(-a.v, -a.d1, -a.d2, -a.d3, a.seam)


def _jmul(a: Jet3, b: Jet3) -> Jet3:
    return Jet3(
        a.v * b.v,
        a.d1 * b.v + a.v * b.d1,
        a.d2 * b.v + 2.0 * (a.d1 * b.d1) + a.v * b.d2,
        a.d3 * b.v + 3.0 * (a.d2 * b.d1) + 3.0 * (a.d1 * b.d2) + a.v * b.d3,
        a.seam or b.seam,
    )


def _jdiv(a: Jet3, b: Jet3) -> Jet3:
    # Solve a = q*b for the derivatives of q, which is tighter over
    # intervals than composing with a reciprocal kernel.
    try:
        q0 = a.v / b.v
        q1 = (a.d1 - q0 * b.d1) / b.v
        q2 = (a.d2 - q0 * b.d2 - 2.0 * (q1 * b.d1)) / b.v
        q3 = (a.d3 - q0 * b.d3 - 3.0 * (q2 * b.d1) - 3.0 * (q1 * b.d2)) / b.v
    except ZeroDivisionError:
        raise DomainViolation("division", b.v) from None
    return Jet3(q0, q1, q2, q3, a.seam or b.seam)


def _chain(g0: Scalar, g1: Scalar, g2: Scalar, g3: Scalar, u: Jet3, seam: bool = False) -> Jet3:
    """Faa di Bruno to order 3: jets of g evaluated at u.v, composed with u."""
    u1sq = _sq(u.d1)
    return Jet3(
        g0,
        g1 * u.d1,
        g2 * u1sq + g1 * u.d2,
        g3 * (u1sq * u.d1) + 3.0 * (g2 * (u.d1 * u.d2)) + g1 * u.d3,
        seam or u.seam,
    )


# ----------------------------------------------------------------------
# builtin kernels: (g, g', g'', g''') at a scalar input
# ----------------------------------------------------------------------


def _kernel_float(name: str, u: float) -> tuple[float, float, float, float]:
    if name == "exp":
        try:
            e = math.exp(u)
        except OverflowError:
            e = math.inf
        return (e, e, e, e)
    if name == "log":
        if u <= 0.0:
            raise DomainViolation("log", u)
        return (math.log(u), 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u))
    if name == "sqrt":
        if u <= 0.0:
            raise DomainViolation("sqrt", u)
        s = math.sqrt(u)
        return (s, 0.5 / s, -0.25 / (u * s), 0.375 / (u * u * s))
    if name == "sin":
        sn, cs = math.sin(u), math.cos(u)
        return (sn, cs, -sn, -cs)
    if name == "cos":
        sn, cs = math.sin(u), math.cos(u)
        return (cs, -sn, -cs, sn)
    if name == "tanh":
        t = math.tanh(u)
        try:
            s2 = (1.0 / math.cosh(u)) ** 2
        except OverflowError:
            s2 = 0.0
        return (t, s2, -2.0 * t * s2, s2 * (6.0 * t * t - 2.0))
    if name == "atan":
        q = 1.0 + u * u
        return (math.atan(u), 1.0 / q, -2.0 * u / (q * q), (6.0 * u * u - 2.0) / (q * q * q))
    if name == "erf":
        g = _TWO_OVER_SQRT_PI_F * math.exp(-u * u)
        return (math.erf(u), g, -2.0 * u * g, (4.0 * u * u - 2.0) * g)
    raise DomainViolation(name, u)


def _kernel_interval(name: str, u: Interval) -> tuple[Interval, Interval, Interval, Interval]:
    if name == "exp":
        e = exp_i(u)
        return (e, e, e, e)
    if name == "log":
        v = log_i(u)  # raises unless u.lo > 0
        return (v, 1.0 / u, -(1.0 / u.pow_int(2)), 2.0 / u.pow_int(3))
    if name == "sqrt":
        if u.lo <= 0.0:
            raise DomainViolation("sqrt", u)
        s = sqrt_i(u)
        return (s, 1.0 / (s * 2.0), -(1.0 / ((u * s) * 4.0)), 3.0 / ((u.pow_int(2) * s) * 8.0))
    if name == "sin":
        sn, cs = sin_i(u), cos_i(u)
        return (sn, cs, -sn, -cs)
    if name == "cos":
        sn, cs = sin_i(u), cos_i(u)
        return (cs, -sn, -cs, sn)
    if name == "tanh":
        t = tanh_i(u)
        s2 = sech2_i(u)
        return (t, s2, (t * s2) * -2.0, s2 * (t.pow_int(2) * 6.0 - 2.0))
    if name == "atan":
        q = u.pow_int(2) + 1.0
        return (atan_i(u), 1.0 / q, (u * -2.0) / q.pow_int(2), (u.pow_int(2) * 6.0 - 2.0) / q.pow_int(3))
    if name == "erf":
        g = TWO_OVER_SQRT_PI * exp_i(-(u.pow_int(2)))
        return (erf_i(u), g, (u * -2.0) * g, (u.pow_int(2) * 4.0 - 2.0) * g)
    raise DomainViolation(name, u)


def _pow_kernel(u: Scalar, n: int) -> tuple[Scalar, Scalar, Scalar, Scalar]:
    c1 = float(n)
    c2 = float(n * (n - 1))
    c3 = float(n * (n - 1) * (n - 2))

    def term(c: float, k: int) -> Scalar:
        if c == 0.0:
            return _zero_like(u)
        if isinstance(u, Interval):
            return u.pow_int(k) * c
        if u == 0.0 and k < 0:
            raise DomainViolation("pow_int", u)
        return c * u**k

    return (term(1.0, n), term(c1, n - 1), term(c2, n - 2), term(c3, n - 3))


# ----------------------------------------------------------------------
# evaluators
# ----------------------------------------------------------------------

_POINT_FUNCS = {
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "tanh": math.tanh,
    "atan": math.atan,
    "erf": math.erf,
}

_INTERVAL_FUNCS = {
    "exp": exp_i,
    "log": log_i,
    "sqrt": sqrt_i,
    "sin": sin_i,
    "cos": cos_i,
    "tanh": tanh_i,
    "atan": atan_i,
    "erf": erf_i,
}


def eval_point(f: FunctionExpr, x: float) -> float:
    """Plain float evaluation (round-to-nearest, no enclosure claims)."""
    match f:
        case Constant(v):
            return v
        case Variable():
            return x
        case Add(l, r):
            return eval_point(l, x) + eval_point(r, x)
        case Sub(l, r):
            return eval_point(l, x) - eval_point(r, x)
        case Mul(l, r):
            return eval_point(l, x) * eval_point(r, x)
        case Div(l, r):
            den = eval_point(r, x)
            if den == 0.0:
                raise DomainViolation("division", x)
            return eval_point(l, x) / den
        case PowInt(b, n):
            bv = eval_point(b, x)
            if bv == 0.0 and n < 0:
                raise DomainViolation("pow_int", x)
            return bv**n
        case Neg(e):
            return -eval_point(e, x)
        case Apply(name, e):
            u = eval_point(e, x)
            if name == "log" and u <= 0.0:
                raise DomainViolation("log", u)
            if name == "sqrt" and u < 0.0:
                raise DomainViolation("sqrt", u)
            try:
                return _POINT_FUNCS[name](u)
            except OverflowError:
                return math.inf
        case Glue(l, r, arg):
            t = eval_point(arg, x)
            return eval_point(l, t) if t <= 0.0 else eval_point(r, t)
    raise TypeError(f"unknown node {f!r}")


def interval_eval(f: FunctionExpr, x: Interval) -> Interval:
    """Enclosure of { f(t) : t in x }."""
    match f:
        case Constant(v):
            return Interval.point(v)
        case Variable():
            return x
        case Add(l, r):
            return interval_eval(l, x) + interval_eval(r, x)
        case Sub(l, r):
            return interval_eval(l, x) - interval_eval(r, x)
        case Mul(l, r):
            return interval_eval(l, x) * interval_eval(r, x)
        case Div(l, r):
            return interval_eval(l, x) / interval_eval(r, x)
        case PowInt(b, n):
            return interval_eval(b, x).pow_int(n)
        case Neg(e):
            return -interval_eval(e, x)
        case Apply(name, e):
            return _INTERVAL_FUNCS[name](interval_eval(e, x))
        case Glue(l, r, arg):
            t = interval_eval(arg, x)
            if t.hi <= 0.0:
                return interval_eval(l, t)
            if t.lo >= 0.0:
                return interval_eval(r, t)
            neg = interval_eval(l, Interval(t.lo, 0.0))
            pos = interval_eval(r, Interval(0.0, t.hi))
            return neg.hull(pos)
    raise TypeError(f"unknown node {f!r}")


def _hull_jets(a: Jet3, b: Jet3, seam: bool) -> Jet3:
    return Jet3(a.v.hull(b.v), a.d1.hull(b.d1), a.d2.hull(b.d2), a.d3.hull(b.d3), seam)


def jet_eval(f: FunctionExpr, x: Scalar) -> Jet3:
    """Jet of f at a point (float) or over an interval (enclosing jet).

    Raises :class:`DomainViolation` when the evaluation reaches a
    primitive outside the region where its order-3 jet exists.
    """
    is_interval = isinstance(x, Interval)
    one = Interval.point(1.0) if is_interval else 1.0
    zero = Interval.point(0.0) if is_interval else 0.0

    def walk(e: FunctionExpr) -> Jet3:
        match e:
            case Constant(v):
                return Jet3(Interval.point(v) if is_interval else v, zero, zero, zero)
            case Variable():
                return Jet3(x, one, zero, zero)
            case Add(l, r):
                return _jadd(walk(l), walk(r))
            case Sub(l, r):
                return _jsub(walk(l), walk(r))
            case Mul(l, r):
                return _jmul(walk(l), walk(r))
            case Div(l, r):
                num, den = walk(l), walk(r)
                if is_interval:
                    if den.v.straddles_zero():
                        raise DomainViolation("division", den.v)
                elif den.v == 0.0:
                    raise DomainViolation("division", den.v)
                return _jdiv(num, den)
            case PowInt(b, n):
                u = walk(b)
                g0, g1, g2, g3 = _pow_kernel(u.v, n)
                return _chain(g0, g1, g2, g3, u)
            case Neg(inner):
                return _jneg(walk(inner))
            case Apply(name, inner):
                u = walk(inner)
                if is_interval:
                    g0, g1, g2, g3 = _kernel_interval(name, u.v)
                else:
                    g0, g1, g2, g3 = _kernel_float(name, u.v)
                return _chain(g0, g1, g2, g3, u)
            case Glue(l, r, arg):
                u = walk(arg)
                if not is_interval:
                    t = u.v
                    if t < 0.0:
                        branch = jet_eval(l, t)
                        return _chain(*branch.as_tuple(), u, seam=branch.seam)
                    if t > 0.0:
                        branch = jet_eval(r, t)
                        return _chain(*branch.as_tuple(), u, seam=branch.seam)
                    branch = jet_eval(l, 0.0)
                    return _chain(*branch.as_tuple(), u, seam=True)
                t = u.v
                if t.hi <= 0.0:
                    branch = jet_eval(l, t)
                    return _chain(*branch.as_tuple(), u, seam=branch.seam)
                if t.lo >= 0.0:
                    branch = jet_eval(r, t)
                    return _chain(*branch.as_tuple(), u, seam=branch.seam)
                bl = jet_eval(l, Interval(t.lo, 0.0))
                br = jet_eval(r, Interval(0.0, t.hi))
                jl = _chain(*bl.as_tuple(), u)
                jr = _chain(*br.as_tuple(), u)
                return _hull_jets(jl, jr, seam=True)
        raise TypeError(f"unknown node {e!r}")

    return walk(f)


def derivative_at(f: FunctionExpr, x: float) -> float:
    """f'(x) by the float jet path."""
    return jet_eval(f, x).d1
