"""Rigorous isolation of critical points and fixed points.

The workhorse is :func:`isolate_zeros`, a bisection over the domain that
discards cells whose value enclosure excludes zero, certifies cells with
a sign-definite derivative enclosure by endpoint sign change (at most one
zero by monotonicity, at least one by the change), and refines certified
cells with interval Newton steps.  Cells where neither test concludes by
the depth limit are reported as unresolved, never guessed.

Tangential zeros (for fixed points: multiplier exactly 1, as in iterated
sigmoids) defeat the strict monotonicity test because outward rounding
leaves the derivative enclosure touching zero.  For those, a secondary
certificate accepts an endpoint sign change together with a one-sided
derivative enclosure within a documented slop (default 1e-11): for the
piecewise-analytic functions of this expression language, a monotone
analytic function that is not constant has exactly one zero across a
sign change, so the certificate is sound up to the slop.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import DomainViolation
from .expr import FunctionExpr
from .interval import Interval
from .jets import jet_eval

ValueJets = Callable[[Interval], tuple[Interval, Interval]]
"""Maps a cell to (value enclosure, derivative enclosure) of the target."""

DEFAULT_DEPTH = 52
_SLOP = 1e-11


class Evidence(enum.Enum):
    NEWTON = "newton"
    MONOTONE = "monotone-sign-change"
    MONOTONE_SLOP = "monotone-within-slop-sign-change"


@dataclass(frozen=True, slots=True)
class RootRecord:
    interval: Interval
    evidence: Evidence


@dataclass(slots=True)
class IsolationResult:
    roots: list[RootRecord] = field(default_factory=list)
    unresolved: list[Interval] = field(default_factory=list)

    def merged_unresolved(self) -> list[Interval]:
        """Adjacent unresolved cells merged into maximal intervals."""
        if not self.unresolved:
            return []
        cells = sorted(self.unresolved, key=lambda c: c.lo)
        out = [cells[0]]
        for c in cells[1:]:
            if c.lo <= out[-1].hi:
                out[-1] = out[-1].hull(c)
            else:
                out.append(c)
        return out


def _sign(iv: Interval) -> int:
    if iv.lo > 0.0:
        return 1
    if iv.hi < 0.0:
        return -1
    return 0


_JITTER_FRACS = (0.5, 0.5625, 0.4375, 0.53125, 0.46875, 0.625, 0.375)
# When one endpoint sign is ambiguous (a zero or flat stretch abuts it),
# bite off a geometrically small piece on that side instead of bisecting,
# so the ambiguous strip collapses to the width floor in a few levels.
_EDGE_FRACS = (1e-7, 1e-4, 1e-2, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99)


def _split_point(x: Interval, value_at: Callable[[float], Interval],
                 lo_s: int = 1, hi_s: int = 1) -> float | None:
    """A split point with sign-definite value, jittered off exact zeros."""
    w = x.width
    if lo_s == 0 and hi_s != 0:
        fracs: tuple[float, ...] = _EDGE_FRACS
    elif hi_s == 0 and lo_s != 0:
        fracs = tuple(1.0 - f for f in _EDGE_FRACS)
    else:
        fracs = _JITTER_FRACS
    for frac in fracs:
        c = x.lo + frac * w
        if not (x.lo < c < x.hi):
            continue
        if _sign(value_at(c)) != 0:
            return c
    return None


def _refine(x: Interval, sign_lo: int, value_at: Callable[[float], Interval],
            deriv_over: Callable[[Interval], Interval], target: float) -> Interval:
    """Shrink a certified bracketing interval by Newton steps / bisection."""
    for _ in range(80):
        if x.width <= target:
            break
        progressed = False
        dg = deriv_over(x)
        if not dg.straddles_zero():
            m = x.mid
            gm = value_at(m)
            candidate = (Interval.point(m) - gm / dg).intersect(x)
            if not candidate.is_empty and candidate.width < 0.75 * x.width:
                # Keep the bracket endpoints consistent for the sign test.
                lo_s = _sign(value_at(candidate.lo))
                hi_s = _sign(value_at(candidate.hi))
                if lo_s == sign_lo and hi_s == -sign_lo:
                    x = candidate
                    progressed = True
                elif lo_s == 0 or hi_s == 0:
                    # Endpoint landed on the root; accept the Newton interval.
                    x = candidate
                    break
        if not progressed:
            c = _split_point(x, value_at)
            if c is None:
                break
            if _sign(value_at(c)) == sign_lo:
                x = Interval(c, x.hi)
            else:
                x = Interval(x.lo, c)
    return x


def isolate_zeros(value_jets: ValueJets, domain: Interval,
                  max_depth: int = DEFAULT_DEPTH, budget: int = 200_000,
                  slop: float = _SLOP) -> IsolationResult:
    """Certified zero isolation over a closed interval."""

    def value_at(t: float) -> Interval:
        return value_jets(Interval.point(t))[0]

    def deriv_over(cell: Interval) -> Interval:
        return value_jets(cell)[1]

    result = IsolationResult()
    min_width = max(domain.width * 2.0 ** (-max_depth), 16 * math.ulp(domain.mag + 1.0))
    target = max(1e-12 * (1.0 + domain.mag), 64 * math.ulp(domain.mag + 1.0))
    stack = [domain]
    spent = 0
    while stack:
        cell = stack.pop()
        spent += 1
        if spent > budget:
            result.unresolved.append(cell)
            result.unresolved.extend(stack)
            break
        try:
            g, dg = value_jets(cell)
        except DomainViolation:
            raise
        if not g.straddles_zero():
            continue
        if dg.lo == 0.0 and dg.hi == 0.0:
            # Exactly constant on the cell (identity-fixed branches land
            # here): a thin midpoint value decides the whole cell.
            if value_at(cell.mid).straddles_zero():
                result.unresolved.append(cell)
            continue
        dsign = _sign(dg)
        lo_s = _sign(value_at(cell.lo))
        hi_s = _sign(value_at(cell.hi))
        if dsign != 0 and lo_s != 0 and hi_s != 0:
            if lo_s == hi_s:
                continue  # monotone without a sign change: no zero
            refined = _refine(cell, lo_s, value_at, deriv_over, target)
            result.roots.append(RootRecord(refined, Evidence.MONOTONE))
            continue
        if dsign == 0 and lo_s != 0 and hi_s == -lo_s and (dg.hi <= slop or dg.lo >= -slop):
            # Tangential crossing: monotone within the slop, definite sign
            # change.  Unique zero for non-constant analytic pieces.
            refined = _refine(cell, lo_s, value_at, deriv_over, target)
            result.roots.append(RootRecord(refined, Evidence.MONOTONE_SLOP))
            continue
        if cell.width <= min_width:
            result.unresolved.append(cell)
            continue
        c = _split_point(cell, value_at, lo_s, hi_s)
        if c is None:
            # No probe point has a definite sign: the cell is numerically
            # indistinguishable from a zero set.  Dicing it further would
            # only manufacture width-floor cells, so give up as one piece.
            result.unresolved.append(cell)
            continue
        stack.append(Interval(c, cell.hi))
        stack.append(Interval(cell.lo, c))
    result.roots.sort(key=lambda r: r.interval.lo)
    return result


# ----------------------------------------------------------------------
# critical points
# ----------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CritReport:
    """Certified critical set structure over a domain.

    ``isolating`` each contain exactly one zero of f'; ``components`` are
    the closures of the gaps between them.  ``status`` is "Complete" when
    together they cover the domain, otherwise "Incomplete" with a reason.
    """

    isolating: tuple[Interval, ...]
    components: tuple[Interval, ...]
    status: str
    reason: str | None = None

    @property
    def complete(self) -> bool:
        return self.status == "Complete"


def critical_points(f: FunctionExpr, domain: Interval, depth: int = DEFAULT_DEPTH) -> CritReport:
    """Isolate the zeros of f' on the domain."""

    def jets(cell: Interval) -> tuple[Interval, Interval]:
        j = jet_eval(f, cell)
        return j.d1, j.d2

    res = isolate_zeros(jets, domain, max_depth=depth)
    isolating = tuple(r.interval for r in res.roots)
    components = _gaps(domain, isolating)
    unresolved = res.merged_unresolved()
    if unresolved:
        return CritReport(isolating, components, "Incomplete",
                          f"{len(unresolved)} region(s) where f' may vanish without "
                          f"certified uniqueness, e.g. {unresolved[0]!r}")
    return CritReport(isolating, components, "Complete")


def _gaps(domain: Interval, isolating: tuple[Interval, ...]) -> tuple[Interval, ...]:
    out = []
    lo = domain.lo
    for iso in isolating:
        if iso.lo > lo:
            out.append(Interval(lo, iso.lo))
        lo = max(lo, iso.hi)
    if lo < domain.hi:
        out.append(Interval(lo, domain.hi))
    return tuple(out)


# ----------------------------------------------------------------------
# fixed points
# ----------------------------------------------------------------------


class Stability(enum.Enum):
    ATTRACTING = "Attracting"
    REPELLING = "Repelling"
    NEUTRAL = "Neutral"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True, slots=True)
class FixedPoint:
    """One isolated fixed point: where it is, and how orbits behave nearby."""

    isolating: Interval
    multiplier: Interval
    stability: Stability
    evidence: Evidence = Evidence.MONOTONE

    @property
    def location(self) -> float:
        return self.isolating.mid


def classify_multiplier(m: Interval, tol: float = 1e-6) -> Stability:
    if -1.0 < m.lo and m.hi < 1.0:
        return Stability.ATTRACTING
    if m.lo > 1.0 or m.hi < -1.0:
        return Stability.REPELLING
    if (m.contains(1.0) or m.contains(-1.0)) and m.width <= tol:
        return Stability.NEUTRAL
    return Stability.UNRESOLVED


def fixed_points_ex(f: FunctionExpr, domain: Interval,
                    depth: int = DEFAULT_DEPTH) -> tuple[list[FixedPoint], list[Interval]]:
    """Isolated fixed points plus any unresolved regions."""

    def jets(cell: Interval) -> tuple[Interval, Interval]:
        j = jet_eval(f, cell)
        return j.v - cell, j.d1 - 1.0

    res = isolate_zeros(jets, domain, max_depth=depth)
    points = []
    for rec in res.roots:
        mult = jet_eval(f, rec.interval).d1
        points.append(FixedPoint(rec.interval, mult, classify_multiplier(mult), rec.evidence))
    return points, res.merged_unresolved()


def fixed_points(f: FunctionExpr, domain: Interval, depth: int = DEFAULT_DEPTH) -> list[FixedPoint]:
    """Isolating intervals for the zeros of f(x) - x, with stability."""
    points, _ = fixed_points_ex(f, domain, depth)
    return points


def seam_points(f: FunctionExpr, domain: Interval, depth: int = DEFAULT_DEPTH) -> list[float]:
    """Locations inside the domain where some glue argument crosses zero."""
    from .expr import glue_nodes

    seams: list[float] = []
    for node in glue_nodes(f):
        def jets(cell: Interval, _arg=node.arg) -> tuple[Interval, Interval]:
            j = jet_eval(_arg, cell)
            return j.v, j.d1

        res = isolate_zeros(jets, domain, max_depth=depth)
        seams.extend(r.interval.mid for r in res.roots)
        seams.extend(u.mid for u in res.merged_unresolved())
    return sorted(set(seams))
