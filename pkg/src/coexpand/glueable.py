"""Certification of the gluing hypotheses.

A branch is glueable when it vanishes at 0 with derivative 1 and stays
inside the cone |f(t)| <= |t| on the component of zero of its domain
minus critical points.  Both branch functions of a glued tree must pass
on the side where they are actually used (left branch on t <= 0, right
on t >= 0); the checker reports each side separately because useful
branches like exp(t) - 1 satisfy the cone bound on one side only.

Two rigor notes, both documented here because they bound what "pass"
means.  First, the seam conditions f(0) = 0 and f'(0) = 1 are accepted
when the point enclosures lie within ``seam_slop`` (default 1e-11) of the
exact values; outward rounding makes exact equality unprovable.  Second,
the cone bound near 0 is certified through the mean value form
f(t)/t in f'([0, t]) + f(0)/t, with the f(0) uncertainty absorbed over a
strip whose width is chosen so the correction stays below the bound
slop.  Both slops are orders of magnitude below anything the analysis
depends on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainViolation, PreconditionUnmet
from .expr import FunctionExpr
from .interval import Interval
from .jets import interval_eval, jet_eval
from .roots import critical_points

SEAM_SLOP = 1e-11
BOUND_SLOP = 1e-9


@dataclass(frozen=True, slots=True)
class GlueableResult:
    verdict: str  # "Glueable" | "NotGlueable" | "Unknown"
    left_bound_ok: bool = False
    right_bound_ok: bool = False
    witness: float | None = None
    reason: str | None = None


def _cone_bound_side(f: FunctionExpr, side: Interval, value_at_zero: Interval,
                     max_depth: int, tol: float) -> tuple[str, float | None]:
    """Certify f(t)/t in [-1-tol, 1+tol] on one side of the seam.

    ``side`` has 0 as one endpoint.  Returns ("ok"|"fail"|"unknown", witness).
    """
    if side.width == 0.0:
        return "ok", None
    bound = Interval(-1.0 - tol, 1.0 + tol)
    e0 = value_at_zero.mag
    # Strip adjacent to 0: mean value form with the f(0)/t correction.
    eta = min(max(e0 / (0.25 * tol), 1e-7), 0.5 * side.width) if side.width > 0 else 0.0
    if side.hi == 0.0:
        strip = Interval(-eta, 0.0)
        rest = Interval(side.lo, -eta)
    else:
        strip = Interval(0.0, eta)
        rest = Interval(eta, side.hi)
    try:
        j = jet_eval(f, strip)
        q_strip = j.d1.widen(e0 / eta if eta > 0 else 0.0)
        if not bound.contains_interval(q_strip):
            return "unknown", None
    except DomainViolation:
        return "unknown", None

    def quotient(t: Interval) -> Interval:
        # Direct form intersected with the mean value form anchored at 0;
        # the latter defeats the f(t)/t dependency (t/t alone never
        # certifies), the former stays tight away from the seam.
        q = interval_eval(f, t) / t
        hull0 = Interval(min(t.lo, 0.0), max(t.hi, 0.0))
        try:
            mvt = jet_eval(f, hull0).d1 + value_at_zero / t
        except DomainViolation:
            return q
        tighter = q.intersect(mvt)
        return q.hull(mvt) if tighter.is_empty else tighter

    min_width = max(rest.width * 2.0 ** (-max_depth), 32 * math.ulp(1.0 + rest.mag))
    stack = [rest]
    spent = 0
    while stack:
        t = stack.pop()
        spent += 1
        if spent > 100_000:
            return "unknown", None
        try:
            q = quotient(t)
        except DomainViolation:
            return "unknown", None
        if bound.contains_interval(q):
            continue
        # Rigorous point check for a genuine violation.
        m = t.mid
        try:
            qm = interval_eval(f, Interval.point(m)) / Interval.point(m)
            if qm.lo > 1.0 + tol or qm.hi < -1.0 - tol:
                return "fail", m
        except DomainViolation:
            pass
        if t.width <= min_width:
            return "unknown", None
        c = t.mid
        stack.append(Interval(t.lo, c))
        stack.append(Interval(c, t.hi))
    return "ok", None


def glueable_check(f: FunctionExpr, domain: Interval, params=None,
                   max_depth: int = 40, tol: float = BOUND_SLOP) -> GlueableResult:
    """Check the gluing hypotheses for one branch over a window.

    ``params`` may be a :class:`~coexpand.certify.CertifyParams`; its
    ``max_depth`` then overrides the default subdivision depth.
    """
    if params is not None and hasattr(params, "max_depth"):
        max_depth = max(params.max_depth, 20)
    if not domain.contains(0.0):
        raise PreconditionUnmet("the gluing window must contain 0")

    j0 = jet_eval(f, Interval.point(0.0))
    if not j0.v.contains(0.0):
        return GlueableResult("NotGlueable", reason="f(0) != 0")
    if j0.v.mag > SEAM_SLOP:
        return GlueableResult("Unknown", reason="f(0) = 0 not certifiable within slop")
    if not j0.d1.contains(1.0):
        return GlueableResult("NotGlueable", reason="slope-at-zero: f'(0) != 1")
    if (j0.d1 - 1.0).mag > SEAM_SLOP:
        return GlueableResult("Unknown", reason="f'(0) = 1 not certifiable within slop")

    crit = critical_points(f, domain, depth=max(max_depth, 30))
    if not crit.complete:
        return GlueableResult("Unknown", reason=f"critical set incomplete: {crit.reason}")
    comp = None
    for c in crit.components:
        if c.contains(0.0):
            comp = c
            break
    if comp is None:
        return GlueableResult("Unknown", reason="0 is not inside a certified component")

    left_state, left_witness = _cone_bound_side(
        f, Interval(comp.lo, 0.0), j0.v, max_depth, tol)
    right_state, right_witness = _cone_bound_side(
        f, Interval(0.0, comp.hi), j0.v, max_depth, tol)

    left_ok = left_state == "ok"
    right_ok = right_state == "ok"
    if left_ok or right_ok:
        return GlueableResult("Glueable", left_ok, right_ok,
                              witness=left_witness if not left_ok else right_witness,
                              reason=None)
    if left_state == "fail" and right_state == "fail":
        return GlueableResult("NotGlueable", False, False,
                              witness=left_witness,
                              reason="|f(t)| <= |t| fails on both sides")
    return GlueableResult("Unknown", False, False,
                          witness=left_witness or right_witness,
                          reason="cone bound not certifiable on either side")
