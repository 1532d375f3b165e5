"""Classification of the fixed-point set of a critical-point-free map.

The structure theorem allows exactly two shapes for members: a closed
interval of fixed points, or at most three isolated ones.  An interval
of fixed points is claimed only with labelled evidence:

* ``IdentityOnInterval`` -- after restricting every glue node to the
  branch active on the candidate region, the tree constant-folds to the
  identity map.  Exact float folding, no approximate arithmetic.
* ``NumericOnly`` -- |f(x) - x| interval-evaluates below a tolerance over
  the region.  Explicitly non-rigorous: floating point cannot prove
  f(x) = x on a continuum.

Finding more than three isolated fixed points for an input asserted to
be a certified member raises :class:`TheoremViolation` -- loudly, since
it would mean a soundness bug in either the certifier or the isolator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .certify import CertifyParams
from .errors import DomainViolation, PreconditionUnmet, TheoremViolation
from .expr import (
    Add,
    Apply,
    Div,
    FunctionExpr,
    Glue,
    Mul,
    Neg,
    PowInt,
    Sub,
    Variable,
    as_affine,
    glue_nodes,
    substitute,
)
from .interval import Interval
from .jets import interval_eval
from .roots import FixedPoint, critical_points, fixed_points_ex, seam_points

FINITE_SET = "FiniteSet"
INTERVAL_FIX = "IntervalFix"
UNRESOLVED = "Unresolved"

IDENTITY_EVIDENCE = "IdentityOnInterval"
NUMERIC_EVIDENCE = "NumericOnly"

_NUMERIC_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class FixSetClass:
    kind: str  # FiniteSet | IntervalFix | Unresolved
    points: tuple[FixedPoint, ...] = ()
    interval: Interval | None = None
    evidence: str | None = None
    notes: tuple[str, ...] = ()


def _restrict_glue(f: FunctionExpr, region: Interval) -> FunctionExpr:
    """Replace glue nodes by their active branch where the region decides it."""
    match f:
        case Glue(l, r, arg):
            arg_r = _restrict_glue(arg, region)
            try:
                t = interval_eval(arg_r, region)
            except DomainViolation:
                return Glue(l, r, arg_r)
            if t.hi <= 0.0:
                return _restrict_glue(substitute(l, arg_r), region)
            if t.lo >= 0.0:
                return _restrict_glue(substitute(r, arg_r), region)
            return Glue(l, r, arg_r)
        case Add(l, r):
            return Add(_restrict_glue(l, region), _restrict_glue(r, region))
        case Sub(l, r):
            return Sub(_restrict_glue(l, region), _restrict_glue(r, region))
        case Mul(l, r):
            return Mul(_restrict_glue(l, region), _restrict_glue(r, region))
        case Div(l, r):
            return Div(_restrict_glue(l, region), _restrict_glue(r, region))
        case PowInt(b, n):
            return PowInt(_restrict_glue(b, region), n)
        case Neg(e):
            return Neg(_restrict_glue(e, region))
        case Apply(name, e):
            return Apply(name, _restrict_glue(e, region))
    return f


def identity_regions(f: FunctionExpr, domain: Interval) -> list[Interval]:
    """Maximal subintervals where f constant-folds to the identity."""
    if not glue_nodes(f):
        aff = as_affine(f)
        return [domain] if aff == (1.0, 0.0) else []
    cuts = [s for s in seam_points(f, domain) if domain.lo < s < domain.hi]
    bounds = [domain.lo, *cuts, domain.hi]
    out: list[Interval] = []
    for lo, hi in zip(bounds, bounds[1:]):
        region = Interval(lo, hi)
        if as_affine(_restrict_glue(f, region)) == (1.0, 0.0):
            if out and out[-1].hi >= region.lo:
                out[-1] = out[-1].hull(region)
            else:
                out.append(region)
    return out


def _numeric_flat(f: FunctionExpr, region: Interval, pieces: int = 64) -> bool:
    step = region.width / pieces
    for i in range(pieces):
        t = Interval(region.lo + i * step, region.lo + (i + 1) * step)
        try:
            d = interval_eval(f, t) - t
        except DomainViolation:
            return False
        if d.mag > _NUMERIC_TOL:
            return False
    return True


def classify_fixed_set(f: FunctionExpr, domain: Interval,
                       params: CertifyParams | None = None,
                       certified_member: bool = False) -> FixSetClass:
    """Classify Fix(f) over a window with no critical points in it.

    ``certified_member`` asserts that f was certified (or is assumed) to
    be nowhere coexpanding; with it set, structural violations raise
    :class:`TheoremViolation` instead of degrading to Unresolved.
    """
    params = params or CertifyParams()
    crit = critical_points(f, domain)
    if not crit.complete:
        raise PreconditionUnmet(f"critical set not resolved: {crit.reason}")
    if crit.isolating:
        raise PreconditionUnmet("classification requires no critical points in the window")

    notes: list[str] = []
    id_regions = identity_regions(f, domain)
    tol_touch = 1e-5 * (1.0 + domain.width)

    def in_identity(iv: Interval) -> bool:
        return any(iv.lo <= r.hi + tol_touch and r.lo - tol_touch <= iv.hi for r in id_regions)

    points: list[FixedPoint] = []
    unresolved: list[Interval] = []
    search_regions: list[Interval] = []
    lo = domain.lo
    for r in id_regions:
        if r.lo > lo:
            search_regions.append(Interval(lo, r.lo))
        lo = max(lo, r.hi)
    if lo < domain.hi:
        search_regions.append(Interval(lo, domain.hi))
    if not id_regions:
        search_regions = [domain]
    for sr in search_regions:
        pts, unres = fixed_points_ex(f, sr, depth=params.max_depth + 22)
        points.extend(p for p in pts if not in_identity(p.isolating))
        for u in unres:
            if u.width <= tol_touch and in_identity(u):
                continue  # sliver on the boundary of an identity interval
            unresolved.append(u)

    if id_regions:
        interval_fix = id_regions[0]
        for r in id_regions[1:]:
            interval_fix = interval_fix.hull(r)
        if len(id_regions) > 1:
            notes.append("multiple identity regions hulled together")
        if points:
            msg = (f"identity interval [{interval_fix.lo}, {interval_fix.hi}] coexists "
                   f"with {len(points)} isolated fixed point(s)")
            if certified_member:
                raise TheoremViolation(msg)
            return FixSetClass(UNRESOLVED, tuple(points), interval_fix,
                               IDENTITY_EVIDENCE, (msg,))
        return FixSetClass(INTERVAL_FIX, (), interval_fix, IDENTITY_EVIDENCE, tuple(notes))

    wide = [u for u in unresolved if u.width >= 1e-3 * domain.width]
    if wide and all(_numeric_flat(f, u) for u in wide):
        flat = wide[0]
        for u in wide[1:]:
            flat = flat.hull(u)
        notes.append("flat region detected numerically; not a rigorous identity claim")
        return FixSetClass(INTERVAL_FIX, tuple(points), flat, NUMERIC_EVIDENCE, tuple(notes))

    if unresolved:
        notes.append(f"{len(unresolved)} unresolved region(s), e.g. {unresolved[0]!r}")
        return FixSetClass(UNRESOLVED, tuple(points), None, None, tuple(notes))

    if certified_member and len(points) > 3:
        raise TheoremViolation(
            f"{len(points)} isolated fixed points certified for a certified member "
            f"with no critical points; at most three are possible")
    return FixSetClass(FINITE_SET, tuple(points), None, None, tuple(notes))
