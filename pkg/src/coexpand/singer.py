"""Empirical harness for the attracting-orbit/critical-orbit dichotomy.

For every attracting periodic point found (as a fixed point of the
iterated composition tree, filtered by multiplier), the immediate basin
is estimated by marching outward and bisecting the last convergent
sample, and every certified critical point's orbit is followed to see
whether it is attracted to the orbit.  The dichotomy then demands, for
members of the analysed class: an immediate basin reaching the window
boundary ("unbounded" evidence -- unboundedness proper is undecidable
from a finite window), or some critical point attracted to the orbit.

Everything here is sampled orbit arithmetic, deliberately so: this is a
validation harness for the structural theorem, not a certification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BudgetExceeded, DomainViolation, TheoremViolation
from .expr import FunctionExpr, compose, size
from .interval import Interval
from .jets import eval_point
from .roots import Stability, critical_points, fixed_points

_MAX_TREE_NODES = 400_000


@dataclass(frozen=True, slots=True)
class PeriodicOrbit:
    point: float
    period: int
    multiplier: Interval
    orbit: tuple[float, ...]
    basin: Interval
    hits_lower: bool
    hits_upper: bool
    attracted_critical_points: tuple[float, ...]

    @property
    def unbounded_evidence(self) -> bool:
        return self.hits_lower or self.hits_upper

    @property
    def dichotomy_holds(self) -> bool:
        return self.unbounded_evidence or bool(self.attracted_critical_points)


@dataclass(frozen=True, slots=True)
class SingerReport:
    orbits: tuple[PeriodicOrbit, ...]
    critical_points: tuple[float, ...]
    alarm: bool
    notes: tuple[str, ...] = ()


def _orbit_converges(f: FunctionExpr, x: float, target: float, period: int,
                     iters: int, tol: float, escape: Interval) -> bool:
    """Does the orbit of x (sampled every ``period`` steps) reach target?"""
    cur = x
    for _ in range(iters):
        for _ in range(period):
            try:
                cur = eval_point(f, cur)
            except DomainViolation:
                return False
            if not math.isfinite(cur) or not escape.contains(cur):
                return False
        if abs(cur - target) < tol:
            return True
    return False


def _basin_side(f: FunctionExpr, p: float, period: int, direction: int,
                domain: Interval, iters: int, tol: float, escape: Interval) -> tuple[float, bool]:
    """March outward from p; returns (boundary estimate, hit window edge)."""
    limit = domain.hi if direction > 0 else domain.lo
    step = max(1e-4 * domain.width, 1e-6)
    good = p
    x = p + direction * step
    while (x < limit) if direction > 0 else (x > limit):
        if _orbit_converges(f, x, p, period, iters, tol, escape):
            good = x
            step *= 2.0
            x = good + direction * step
        else:
            break
    else:
        if _orbit_converges(f, limit, p, period, iters, tol, escape) or good != p:
            return limit, True
    bad = x if ((x < limit) if direction > 0 else (x > limit)) else limit
    if _orbit_converges(f, bad, p, period, iters, tol, escape):
        return limit, True
    for _ in range(60):
        mid = 0.5 * (good + bad)
        if _orbit_converges(f, mid, p, period, iters, tol, escape):
            good = mid
        else:
            bad = mid
    return good, False


def singer_check(f: FunctionExpr, domain: Interval, max_period: int = 4,
                 iters: int = 1000, tol: float = 1e-6,
                 certified_member: bool = False) -> SingerReport:
    """Locate attracting orbits and test the basin/critical-orbit dichotomy.

    Raises :class:`BudgetExceeded` when iterated composition trees grow
    past the node budget before ``max_period`` is reached, and (only with
    ``certified_member``) :class:`TheoremViolation` when the dichotomy
    fails for some orbit.
    """
    notes: list[str] = []
    crit = critical_points(f, domain)
    crit_pts = tuple(iso.mid for iso in crit.isolating)
    if not crit.complete:
        notes.append(f"critical set incomplete: {crit.reason}")
    escape = Interval(domain.lo - 10.0 * (1.0 + domain.width),
                      domain.hi + 10.0 * (1.0 + domain.width))

    orbits: list[PeriodicOrbit] = []
    known: list[float] = []
    fn = f
    for period in range(1, max_period + 1):
        if period > 1:
            fn = compose(f, fn)
            if size(fn) > _MAX_TREE_NODES:
                raise BudgetExceeded(
                    f"iterated composition tree exceeds {_MAX_TREE_NODES} nodes at period {period}")
        for fp in fixed_points(fn, domain):
            if fp.stability is not Stability.ATTRACTING:
                continue
            p = fp.location
            if any(abs(p - q) < 10.0 * tol for q in known):
                continue  # lower period or another point of a known cycle
            orbit = [p]
            cur = p
            for _ in range(period - 1):
                cur = eval_point(f, cur)
                orbit.append(cur)
            lo_b, hit_lo = _basin_side(f, p, period, -1, domain, iters, tol, escape)
            hi_b, hit_hi = _basin_side(f, p, period, +1, domain, iters, tol, escape)
            attracted = tuple(
                c for c in crit_pts
                if _crit_attracted(f, c, orbit, iters * period, tol, escape))
            orbits.append(PeriodicOrbit(
                point=p, period=period, multiplier=fp.multiplier,
                orbit=tuple(orbit), basin=Interval(lo_b, hi_b),
                hits_lower=hit_lo, hits_upper=hit_hi,
                attracted_critical_points=attracted))
            known.extend(orbit)

    alarm = any(not o.dichotomy_holds for o in orbits)
    if alarm:
        bad = next(o for o in orbits if not o.dichotomy_holds)
        msg = (f"attracting orbit at {bad.point} (period {bad.period}) has a bounded "
               f"immediate basin and attracts no critical point")
        notes.append("DICHOTOMY VIOLATION: " + msg)
        if certified_member:
            raise TheoremViolation(msg)
    return SingerReport(tuple(orbits), crit_pts, alarm, tuple(notes))


def _crit_attracted(f: FunctionExpr, c: float, orbit: list[float] | tuple[float, ...],
                    steps: int, tol: float, escape: Interval) -> bool:
    cur = c
    for _ in range(steps):
        if any(abs(cur - q) < tol for q in orbit):
            return True
        try:
            cur = eval_point(f, cur)
        except DomainViolation:
            return False
        if not math.isfinite(cur) or not escape.contains(cur):
            return False
    return any(abs(cur - q) < tol for q in orbit)
