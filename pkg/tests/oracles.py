"""Independent oracles used to freeze expected values in the tests.

Everything here is deliberately naive and separate from the library's
own evaluation paths: plain bisection, finite differences, and dense
grid scans over ``math``-level float evaluation.
"""

from __future__ import annotations

import math
import random

from coexpand import FunctionExpr, eval_point
from coexpand.expr import (
    Add,
    Apply,
    Constant,
    Div,
    Mul,
    Neg,
    PowInt,
    Sub,
    Variable,
)


def bisect_root(fun, a: float, b: float, steps: int = 200) -> float:
    """Plain bisection for a bracketed root of a float callable."""
    fa = fun(a)
    for _ in range(steps):
        m = 0.5 * (a + b)
        fm = fun(m)
        if fm == 0.0:
            return m
        if (fa < 0.0) != (fm < 0.0):
            b = m
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def central_d1(fun, x: float, h: float) -> float:
    return (fun(x + h) - fun(x - h)) / (2.0 * h)


def central_d2(fun, x: float, h: float) -> float:
    return (fun(x + h) - 2.0 * fun(x) + fun(x - h)) / (h * h)


def central_d3(fun, x: float, h: float) -> float:
    return (fun(x + 2 * h) - 2.0 * fun(x + h) + 2.0 * fun(x - h) - fun(x - 2 * h)) / (2.0 * h ** 3)


def fd_schwarzian(fun, x: float, h: float = 4e-3) -> float:
    """Finite-difference Schwarzian with one Richardson step per order."""
    def at(step):
        d1 = central_d1(fun, x, step)
        d2 = central_d2(fun, x, step)
        d3 = central_d3(fun, x, step)
        return d1, d2, d3

    d1a, d2a, d3a = at(h)
    d1b, d2b, d3b = at(h / 2.0)
    d1 = (4.0 * d1b - d1a) / 3.0
    d2 = (4.0 * d2b - d2a) / 3.0
    d3 = (4.0 * d3b - d3a) / 3.0
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def mixed_log_partial(fun, dfun, x: float, y: float, h: float = 1e-5) -> float:
    """d^2/dxdy log|(f(x)-f(y))/(x-y)| by central differences."""
    def g(u, v):
        return math.log(abs((fun(u) - fun(v)) / (u - v)))

    return (g(x + h, y + h) - g(x + h, y - h) - g(x - h, y + h) + g(x - h, y - h)) / (4.0 * h * h)


def grid_chi_max(f: FunctionExpr, lo: float, hi: float, n: int = 400,
                 min_gap: float = 1e-7) -> float:
    """Dense-grid maximum of chi over [lo, hi]^2 via numpy outer products."""
    import numpy as np

    from coexpand import jet_eval

    xs = np.linspace(lo, hi, n)
    vals = np.empty(n)
    ders = np.empty(n)
    for i, x in enumerate(xs):
        j = jet_eval(f, float(x))
        vals[i] = j.v
        ders[i] = j.d1
    dx = xs[:, None] - xs[None, :]
    df = vals[:, None] - vals[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        chi = ders[:, None] * ders[None, :] * (dx / df) ** 2
    mask = (np.abs(dx) > min_gap) & (np.abs(df) > 1e-14)
    if not mask.any():
        return -math.inf
    return float(np.nanmax(np.where(mask, chi, -math.inf)))


# ----------------------------------------------------------------------
# random grammar-canonical trees for round-trip and enclosure tests
# ----------------------------------------------------------------------

_BUILTINS = ("exp", "log", "sqrt", "sin", "cos", "tanh", "atan", "erf")


def random_tree(rng: random.Random, depth: int = 3) -> FunctionExpr:
    """A random tree derivable from the public grammar."""
    if depth <= 0:
        if rng.random() < 0.5:
            return Variable()
        return Constant(round(rng.uniform(0.0, 4.0), 3))
    pick = rng.randrange(8)
    if pick == 0:
        return Add(random_tree(rng, depth - 1), random_tree(rng, depth - 1))
    if pick == 1:
        return Sub(random_tree(rng, depth - 1), random_tree(rng, depth - 1))
    if pick == 2:
        return Mul(random_tree(rng, depth - 1), random_tree(rng, depth - 1))
    if pick == 3:
        return Div(random_tree(rng, depth - 1), random_tree(rng, depth - 1))
    if pick == 4:
        return PowInt(random_tree(rng, depth - 1), rng.randrange(-3, 6))
    if pick == 5:
        return Neg(random_tree(rng, depth - 1))
    if pick == 6:
        return Apply(rng.choice(_BUILTINS), random_tree(rng, depth - 1))
    return Variable()


def random_smooth_tree(rng: random.Random, depth: int = 3) -> FunctionExpr:
    """Random tree from total primitives only (no log/sqrt/div/negative pow)."""
    if depth <= 0:
        if rng.random() < 0.6:
            return Variable()
        return Constant(round(rng.uniform(0.0, 2.0), 3))
    pick = rng.randrange(7)
    if pick == 0:
        return Add(random_smooth_tree(rng, depth - 1), random_smooth_tree(rng, depth - 1))
    if pick == 1:
        return Sub(random_smooth_tree(rng, depth - 1), random_smooth_tree(rng, depth - 1))
    if pick == 2:
        return Mul(random_smooth_tree(rng, depth - 1), random_smooth_tree(rng, depth - 1))
    if pick == 3:
        return PowInt(random_smooth_tree(rng, depth - 1), rng.randrange(0, 4))
    if pick == 4:
        return Neg(random_smooth_tree(rng, depth - 1))
    if pick == 5:
        return Apply(rng.choice(("sin", "cos", "tanh", "atan", "erf")),
                     random_smooth_tree(rng, depth - 1))
    return Variable()


def float_eval_or_none(f: FunctionExpr, x: float) -> float | None:
    from coexpand.errors import DomainViolation

    try:
        v = eval_point(f, x)
    except DomainViolation:
        return None
    return v if math.isfinite(v) else None
