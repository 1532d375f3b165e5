"""Expression trees for scalar functions and the closure operations on them.

A :class:`FunctionExpr` is an immutable tree over one free variable.  The
node set is deliberately small: every primitive is C3 on its natural
domain, so third-order jets exist everywhere except at glue seams.  The
universe is closed under composition, affine conjugation and gluing,
which are the three operations under which the analysed function class
is studied.

Glue nodes represent the piecewise-at-zero concatenation of two branch
functions.  They are never produced by the public parser; construct them
through :func:`glue`, which validates the gluing hypotheses first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateAffine, NotGlueable

BUILTINS = ("exp", "log", "sqrt", "sin", "cos", "tanh", "atan", "erf")


class FunctionExpr:
    """Base class for expression nodes.  Instances are immutable."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, _as_expr(other))

    def __radd__(self, other):
        return Add(_as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, _as_expr(other))

    def __rsub__(self, other):
        return Sub(_as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, _as_expr(other))

    def __rmul__(self, other):
        return Mul(_as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, _as_expr(other))

    def __rtruediv__(self, other):
        return Div(_as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n: int):
        return PowInt(self, n)

    def __str__(self) -> str:
        from .parser import format_expr

        return format_expr(self)


def _as_expr(v) -> FunctionExpr:
    if isinstance(v, FunctionExpr):
        return v
    if isinstance(v, (int, float)):
        return const(float(v))
    raise TypeError(f"cannot use {v!r} as an expression")


@dataclass(frozen=True, slots=True)
class Constant(FunctionExpr):
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("constants must be finite")


@dataclass(frozen=True, slots=True)
class Variable(FunctionExpr):
    pass


@dataclass(frozen=True, slots=True)
class Add(FunctionExpr):
    l: FunctionExpr
    r: FunctionExpr


@dataclass(frozen=True, slots=True)
class Sub(FunctionExpr):
    l: FunctionExpr
    r: FunctionExpr


@dataclass(frozen=True, slots=True)
class Mul(FunctionExpr):
    l: FunctionExpr
    r: FunctionExpr


@dataclass(frozen=True, slots=True)
class Div(FunctionExpr):
    l: FunctionExpr
    r: FunctionExpr


@dataclass(frozen=True, slots=True)
class PowInt(FunctionExpr):
    base: FunctionExpr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int):
            raise TypeError("PowInt exponent must be a literal integer")


@dataclass(frozen=True, slots=True)
class Neg(FunctionExpr):
    e: FunctionExpr


@dataclass(frozen=True, slots=True)
class Apply(FunctionExpr):
    builtin: str
    e: FunctionExpr

    def __post_init__(self):
        if self.builtin not in BUILTINS:
            raise ValueError(f"unknown builtin {self.builtin!r}")


@dataclass(frozen=True, slots=True)
class Glue(FunctionExpr):
    """Piecewise-at-zero node: left(t) for t <= 0, right(t) for t >= 0.

    ``left`` and ``right`` are functions of their own variable; ``arg``
    is the expression the seam test is applied to (``Variable()`` for a
    freshly glued function, something else after composition).  Both
    branches vanish at 0 with derivative 1, which :func:`glue` enforces,
    so the represented function is C1 across the seam.
    """

    left: FunctionExpr
    right: FunctionExpr
    arg: FunctionExpr = field(default_factory=Variable)


X = Variable()


def const(v: float) -> FunctionExpr:
    """Canonical constant node: negatives are represented as Neg(positive).

    The grammar has no signed number literal, so this keeps every tree
    built through the API formattable to text that reparses to an equal
    tree.
    """
    v = float(v)
    if v < 0.0 or (v == 0.0 and math.copysign(1.0, v) < 0):
        return Neg(Constant(-v))
    return Constant(v)


@dataclass(frozen=True, slots=True)
class AffineMap:
    """x -> slope * x + intercept."""

    slope: float
    intercept: float

    def __call__(self, x: float) -> float:
        return self.slope * x + self.intercept

    def to_expr(self) -> FunctionExpr:
        e: FunctionExpr = X
        if self.slope != 1.0:
            e = Mul(const(self.slope), e)
        if self.intercept != 0.0:
            e = Add(e, const(self.intercept))
        return e

    def require_invertible(self) -> None:
        if self.slope == 0.0:
            raise DegenerateAffine("affine map has zero slope")


IDENTITY = AffineMap(1.0, 0.0)


def substitute(f: FunctionExpr, replacement: FunctionExpr) -> FunctionExpr:
    """Replace every Variable leaf of ``f`` with ``replacement``.

    Glue nodes substitute into their seam argument only: the branches
    stay expressed in the glued function's own variable.
    """
    match f:
        case Variable():
            return replacement
        case Constant():
            return f
        case Add(l, r):
            return Add(substitute(l, replacement), substitute(r, replacement))
        case Sub(l, r):
            return Sub(substitute(l, replacement), substitute(r, replacement))
        case Mul(l, r):
            return Mul(substitute(l, replacement), substitute(r, replacement))
        case Div(l, r):
            return Div(substitute(l, replacement), substitute(r, replacement))
        case PowInt(b, n):
            return PowInt(substitute(b, replacement), n)
        case Neg(e):
            return Neg(substitute(e, replacement))
        case Apply(name, e):
            return Apply(name, substitute(e, replacement))
        case Glue(l, r, a):
            return Glue(l, r, substitute(a, replacement))
    raise TypeError(f"unknown node {f!r}")


def compose(g: FunctionExpr, f: FunctionExpr) -> FunctionExpr:
    """Tree for g o f."""
    return substitute(g, f)


def affine_conjugate(f: FunctionExpr, a: AffineMap, b: AffineMap) -> FunctionExpr:
    """Tree for A o f o B with both affine maps non-constant."""
    a.require_invertible()
    b.require_invertible()
    return compose(a.to_expr(), compose(f, b.to_expr()))


def size(f: FunctionExpr) -> int:
    """Node count, gluing branches included."""
    match f:
        case Variable() | Constant():
            return 1
        case Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r):
            return 1 + size(l) + size(r)
        case PowInt(b, _):
            return 1 + size(b)
        case Neg(e) | Apply(_, e):
            return 1 + size(e)
        case Glue(l, r, arg):
            return 1 + size(l) + size(r) + size(arg)
    raise TypeError(f"unknown node {f!r}")


def glue_nodes(f: FunctionExpr) -> list[Glue]:
    """All Glue nodes in ``f`` in preorder (branches and args included)."""
    out: list[Glue] = []

    def walk(e: FunctionExpr) -> None:
        match e:
            case Variable() | Constant():
                pass
            case Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r):
                walk(l)
                walk(r)
            case PowInt(b, _):
                walk(b)
            case Neg(inner) | Apply(_, inner):
                walk(inner)
            case Glue(l, r, arg):
                out.append(e)
                walk(l)
                walk(r)
                walk(arg)

    walk(f)
    return out


def maximal_glue_subtrees(f: FunctionExpr) -> list[Glue]:
    """Glue nodes not nested inside another Glue node of ``f``."""
    out: list[Glue] = []

    def walk(e: FunctionExpr) -> None:
        match e:
            case Variable() | Constant():
                pass
            case Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r):
                walk(l)
                walk(r)
            case PowInt(b, _):
                walk(b)
            case Neg(inner) | Apply(_, inner):
                walk(inner)
            case Glue():
                out.append(e)

    walk(f)
    return out


def replace_subtree(f: FunctionExpr, target: FunctionExpr, replacement: FunctionExpr) -> FunctionExpr:
    """Replace every occurrence of ``target`` (structural equality) in ``f``."""
    if f == target:
        return replacement
    match f:
        case Variable() | Constant():
            return f
        case Add(l, r):
            return Add(replace_subtree(l, target, replacement), replace_subtree(r, target, replacement))
        case Sub(l, r):
            return Sub(replace_subtree(l, target, replacement), replace_subtree(r, target, replacement))
        case Mul(l, r):
            return Mul(replace_subtree(l, target, replacement), replace_subtree(r, target, replacement))
        case Div(l, r):
            return Div(replace_subtree(l, target, replacement), replace_subtree(r, target, replacement))
        case PowInt(b, n):
            return PowInt(replace_subtree(b, target, replacement), n)
        case Neg(e):
            return Neg(replace_subtree(e, target, replacement))
        case Apply(name, e):
            return Apply(name, replace_subtree(e, target, replacement))
        case Glue(l, r, a):
            return Glue(l, r, replace_subtree(a, target, replacement))
    raise TypeError(f"unknown node {f!r}")


def as_affine(f: FunctionExpr) -> tuple[float, float] | None:
    """(a, b) with f == a*x + b under exact constant folding, else None.

    Used for identity detection: a fixed interval claimed through this
    path rests on float-exact folding, never on approximate arithmetic.
    """
    match f:
        case Constant(v):
            return (0.0, v)
        case Variable():
            return (1.0, 0.0)
        case Add(l, r):
            la, ra = as_affine(l), as_affine(r)
            if la is None or ra is None:
                return None
            return (la[0] + ra[0], la[1] + ra[1])
        case Sub(l, r):
            la, ra = as_affine(l), as_affine(r)
            if la is None or ra is None:
                return None
            return (la[0] - ra[0], la[1] - ra[1])
        case Neg(e):
            ea = as_affine(e)
            if ea is None:
                return None
            return (-ea[0], -ea[1])
        case Mul(l, r):
            la, ra = as_affine(l), as_affine(r)
            if la is None or ra is None:
                return None
            if la[0] == 0.0:
                return (la[1] * ra[0], la[1] * ra[1])
            if ra[0] == 0.0:
                return (ra[1] * la[0], ra[1] * la[1])
            return None
        case Div(l, r):
            la, ra = as_affine(l), as_affine(r)
            if la is None or ra is None or ra[0] != 0.0 or ra[1] == 0.0:
                return None
            return (la[0] / ra[1], la[1] / ra[1])
        case PowInt(b, n):
            ba = as_affine(b)
            if ba is None:
                return None
            if n == 0:
                return (0.0, 1.0)
            if n == 1:
                return ba
            if ba[0] == 0.0:
                return (0.0, ba[1] ** n)
            return None
    return None


@dataclass(frozen=True, slots=True)
class GlueParams:
    """Rigor parameters for validating the gluing hypotheses.

    ``window`` bounds the interval on which the branch bound |f(t)| <= |t|
    is certified; seams far outside any analysis window are pointless, so
    a finite window is both necessary and harmless.
    """

    window: float = 8.0
    max_depth: int = 40
    tol: float = 1e-9


def glue(f: FunctionExpr, g: FunctionExpr, validation: GlueParams | None = None) -> FunctionExpr:
    """Concatenate two glueable branches at zero.

    The result evaluates to ``f(x)`` for x <= 0 and ``g(x)`` for x >= 0
    and is C1 at the seam (both branches are checked to vanish at 0 with
    derivative 1).  Raises :class:`NotGlueable` naming the failing branch
    when a hypothesis fails or cannot be certified.
    """
    from .glueable import glueable_check
    from .interval import Interval

    params = validation or GlueParams()
    window = Interval(-params.window, params.window)
    for which, branch, side in (("left", f, "left"), ("right", g, "right")):
        res = glueable_check(branch, window, max_depth=params.max_depth, tol=params.tol)
        if res.verdict == "NotGlueable":
            raise NotGlueable(which, res.reason or "hypotheses fail")
        if res.verdict == "Unknown":
            raise NotGlueable(which, f"cannot certify: {res.reason}")
        side_ok = res.left_bound_ok if side == "left" else res.right_bound_ok
        if not side_ok:
            raise NotGlueable(which, f"|f(x)| <= |x| fails on the {side} side")
    return Glue(f, g)
