"""Membership certification for the nowhere-coexpanding class.

The certificate for a function f over a closed window is assembled per
connected component of the window minus the certified critical set.

Within one component the primary discharge route is the local form of
the Schwarzian characterisation: if S_f <= 0 is proven (by adaptive
interval subdivision) on an entire subinterval P, then no pair drawn
from P is coexpanding -- the characterisation theorem applied to the
restriction f|P.  When that proof covers the whole component, every pair
is discharged at once; this is what makes certification of the paper's
examples terminate at desk scale, because chi enclosures straddle 1 near
the diagonal no matter how small the boxes get.

Glue seams interrupt the Schwarzian route (f is only C1 there).  A
component whose interior contains a seam is discharged through the glue
lemma instead: writing f = outer o (l * r) o arg (possible whenever all
maximal glue subtrees are structurally identical, which holds for every
tree built by composition), the coexpansion functional factors as

    chi_f(x, y) = chi_arg(x, y) * chi_glue(arg x, arg y) * chi_outer(...)

so it suffices to certify each factor: arg and outer recursively, and
the glued middle factor by re-verifying the gluing hypotheses of both
branches plus their membership on the respective sides of the seam.

Where neither route concludes, a branch-and-bound over pair boxes with
|x - y| >= diag_band takes over: boxes are discharged by chi enclosures,
and a rigorous point evaluation with lower bound above 1 + point_margin
falsifies membership with a concrete witness pair.  Residual boxes land
in the Unknown frontier; the diagonal band itself is never box-checked,
so a failing band leg degrades to Unknown, never to Falsified.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

from .chi import chi_box, chi_point_enclosure, schwarzian_enclosure
from .errors import DomainViolation, PreconditionUnmet
from .expr import FunctionExpr, Glue, Variable, maximal_glue_subtrees, replace_subtree
from .glueable import glueable_check
from .interval import Box2, Interval
from .jets import eval_point, interval_eval, jet_eval
from .roots import critical_points

CERTIFIED = "Certified"
FALSIFIED = "Falsified"
UNKNOWN = "Unknown"


@dataclass(frozen=True, slots=True)
class CertifyParams:
    """Search-control knobs; defaults let the stock examples terminate."""

    max_depth: int = 18
    diag_band: float = 1e-3
    point_margin: float = 1e-9
    budget: int = 5_000_000


@dataclass(slots=True)
class Certificate:
    """Outcome of membership certification with its justifying trace."""

    verdict: str
    params: CertifyParams
    components: tuple[Interval, ...]
    witness: tuple[float, float] | None = None
    chi_lower_bound: float | None = None
    frontier: tuple[Box2, ...] = ()
    boxes_processed: int = 0
    wall_time: float = 0.0
    notes: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED


class _Work:
    """Shared work budget; one unit per interval/box evaluation."""

    def __init__(self, budget: int):
        self.budget = budget
        self.spent = 0

    def spend(self, n: int = 1) -> bool:
        self.spent += n
        return self.spent <= self.budget


def _merge(cells: list[Interval]) -> list[Interval]:
    if not cells:
        return []
    cells = sorted(cells, key=lambda c: c.lo)
    out = [cells[0]]
    for c in cells[1:]:
        if c.lo <= out[-1].hi:
            out[-1] = out[-1].hull(c)
        else:
            out.append(c)
    return out


def _critical_edge_ok(f: FunctionExpr, cell: Interval, iso: Interval) -> bool:
    """S_f < 0 on a cell abutting a certified simple critical point.

    With f'(root) = 0 for some root in ``iso`` and f'' sign-definite over
    the hull, the mean value theorem gives f'(x) = f''(xi)(x - root), so

        S_f(x) <= |f'''| / (d2min u) - 1.5 rho^2 / u^2,   u = |x - root|,

    with rho = d2min/d2max over the hull.  The right side is negative for
    u below 1.5 rho^2 d2min / |f'''|; a 0.9 safety factor absorbs the
    float arithmetic of the comparison itself.
    """
    hull = cell.hull(iso)
    try:
        j = jet_eval(f, hull)
    except DomainViolation:
        return False
    if j.seam or j.d2.straddles_zero():
        return False
    d2min = min(abs(j.d2.lo), abs(j.d2.hi))
    d2max = max(abs(j.d2.lo), abs(j.d2.hi))
    d3mag = j.d3.mag
    umax = max(cell.hi - iso.lo, iso.hi - cell.lo)
    if d3mag == 0.0:
        return True
    rho = d2min / d2max
    return umax * d3mag <= 1.35 * rho * rho * d2min


def _schwarzian_leg(f: FunctionExpr, J: Interval, params: CertifyParams, work: _Work,
                    edge_isolations: tuple[Interval, ...] = ()) -> list[Interval]:
    """Subintervals of J where S_f <= 0 could not be proven (empty = proven).

    ``edge_isolations`` are isolating intervals of critical points that
    abut J; cells touching one may be discharged by the edge lemma.
    """
    if J.width == 0.0:
        return []
    min_width = max(J.width * 2.0 ** (-(params.max_depth + 30)), 1e-14)
    failed: list[Interval] = []
    stack = [J]
    while stack:
        t = stack.pop()
        if not work.spend():
            failed.append(t)
            failed.extend(stack)
            break
        s = schwarzian_enclosure(f, t)
        if s is not None and s.hi <= 0.0:
            continue
        edge = next((iso for iso in edge_isolations
                     if t.lo <= iso.hi and iso.lo <= t.hi), None)
        if edge is not None and _critical_edge_ok(f, t, edge):
            continue
        if s is not None and s.lo > 0.0:
            failed.append(t)  # definitely positive Schwarzian: no point splitting
            continue
        if t.width <= min_width:
            failed.append(t)
            continue
        m = t.mid
        stack.append(Interval(t.lo, m))
        stack.append(Interval(m, t.hi))
    return _merge(failed)


def _nonvanishing_d1(tree: FunctionExpr, J: Interval, work: _Work) -> bool:
    """Prove the first derivative of ``tree`` has no zero on J."""
    if J.width == 0.0:
        return True
    min_width = max(J.width * 2.0 ** (-40), 1e-13)
    stack = [J]
    while stack:
        t = stack.pop()
        if not work.spend():
            return False
        try:
            d = jet_eval(tree, t).d1
        except DomainViolation:
            return False
        if not d.straddles_zero():
            continue
        if t.width <= min_width:
            return False
        m = t.mid
        stack.append(Interval(t.lo, m))
        stack.append(Interval(m, t.hi))
    return True


def _range_enclosure(tree: FunctionExpr, J: Interval, pieces: int = 32) -> Interval:
    if J.width == 0.0:
        return interval_eval(tree, J)
    out = Interval.empty()
    step = J.width / pieces
    for i in range(pieces):
        lo = J.lo + i * step
        hi = J.hi if i == pieces - 1 else J.lo + (i + 1) * step
        out = out.hull(interval_eval(tree, Interval(lo, hi)))
    return out


def _prove_member_on(f: FunctionExpr, J: Interval, params: CertifyParams, work: _Work,
                     edge_isolations: tuple[Interval, ...] = ()) -> list[Interval]:
    """Regions of J where nowhere-coexpansion is not (yet) proven."""
    if J.width == 0.0:
        return []
    glues = maximal_glue_subtrees(f)
    seam_inside = False
    for g in glues:
        try:
            if interval_eval(g.arg, J).straddles_zero():
                seam_inside = True
                break
        except DomainViolation:
            return [J]
    if not seam_inside:
        return _schwarzian_leg(f, J, params, work, edge_isolations)

    # Glue route: factor through the (unique) maximal glue subtree.
    # arg' != 0 on the interior of J needs no separate proof: a zero of
    # arg' would be a zero of f' by the chain rule, and the component
    # construction already certified the interior free of those.
    if len(set(glues)) != 1:
        return [J]
    g = glues[0]
    outer = replace_subtree(f, g, Variable())
    try:
        if _prove_member_on(g.arg, J, params, work, edge_isolations):
            return [J]
        a = _range_enclosure(g.arg, J)
        a_neg = Interval(min(a.lo, 0.0), 0.0)
        a_pos = Interval(0.0, max(a.hi, 0.0))
        window = Interval(a_neg.lo, a_pos.hi)
        left_res = glueable_check(g.left, window, params)
        if left_res.verdict != "Glueable" or not left_res.left_bound_ok:
            return [J]
        right_res = glueable_check(g.right, window, params)
        if right_res.verdict != "Glueable" or not right_res.right_bound_ok:
            return [J]
        image = Interval.empty()
        if a_neg.width > 0.0:
            if not _nonvanishing_d1(g.left, a_neg, work):
                return [J]
            if _prove_member_on(g.left, a_neg, params, work):
                return [J]
            image = image.hull(_range_enclosure(g.left, a_neg))
        if a_pos.width > 0.0:
            if not _nonvanishing_d1(g.right, a_pos, work):
                return [J]
            if _prove_member_on(g.right, a_pos, params, work):
                return [J]
            image = image.hull(_range_enclosure(g.right, a_pos))
        if outer != Variable() and not image.is_empty:
            if not _nonvanishing_d1(outer, image, work):
                return [J]
            if _prove_member_on(outer, image, params, work):
                return [J]
    except DomainViolation:
        return [J]
    return []


# ----------------------------------------------------------------------
# chi branch and bound
# ----------------------------------------------------------------------


@dataclass(slots=True)
class _Hunt:
    falsified: tuple[float, float] | None = None
    chi_lower_bound: float | None = None
    frontier: list[Box2] = field(default_factory=list)


def _confirm_witness(f: FunctionExpr, x: float, y: float, margin: float) -> float | None:
    enc = chi_point_enclosure(f, x, y)
    if enc is not None and enc.lo > 1.0 + margin:
        return enc.lo
    return None


def _sample_attack(f: FunctionExpr, regions: list[tuple[Interval, Interval]],
                   margin: float, per_side: int = 16, confirm: int = 48) -> tuple[tuple[float, float], float] | None:
    """Float-sample chi over region pairs, rigorously confirm the leaders."""
    candidates: list[tuple[float, float, float]] = []
    for rx, ry in regions:
        xs = [rx.lo + (i + 0.5) * rx.width / per_side for i in range(per_side)]
        ys = [ry.lo + (i + 0.5) * ry.width / per_side for i in range(per_side)]
        for x in xs:
            jx = None
            for y in ys:
                if x == y:
                    continue
                try:
                    if jx is None:
                        jx = jet_eval(f, x)
                    jy = jet_eval(f, y)
                    denom = jx.v - jy.v
                    if denom == 0.0:
                        continue
                    c = jx.d1 * jy.d1 * ((x - y) / denom) ** 2
                except DomainViolation:
                    continue
                if math.isfinite(c) and c > 1.0:
                    candidates.append((c, x, y))
    candidates.sort(reverse=True)
    for c, x, y in candidates[:confirm]:
        lb = _confirm_witness(f, x, y, margin)
        if lb is not None:
            return (x, y), lb
    return None


def _box_key(b: Box2) -> tuple[float, float, float, float]:
    return (b.x.lo, b.x.hi, b.y.lo, b.y.hi)


def _chi_hunt(f: FunctionExpr, component: Interval, bad: list[Interval],
              params: CertifyParams, work: _Work) -> _Hunt:
    """Certify or falsify all pairs not covered by the Schwarzian route."""
    hunt = _Hunt()
    # Partition the component into proven gaps and failed regions.
    cuts: list[tuple[Interval, bool]] = []
    lo = component.lo
    for r in bad:
        if r.lo > lo:
            cuts.append((Interval(lo, r.lo), True))
        cuts.append((r.intersect(component), False))
        lo = max(lo, r.hi)
    if lo < component.hi:
        cuts.append((Interval(lo, component.hi), True))

    pair_regions = []
    for i, (a, a_proven) in enumerate(cuts):
        for b, b_proven in cuts[i:]:
            if a == b and a_proven:
                continue
            pair_regions.append((a, b))

    found = _sample_attack(f, pair_regions, params.point_margin)
    if found is not None:
        (hx, hy), lb = found
        hunt.falsified = (hx, hy)
        hunt.chi_lower_bound = lb
        return hunt

    # Branch and bound over the uncovered pair regions.  The sampling
    # pass above is the falsification workhorse; this pass either
    # discharges what it cheaply can or hands boxes to the frontier, so
    # it gets a small slice of the budget rather than all of it.
    delta = params.diag_band
    pops = 0
    pop_cap = min(max(params.budget - work.spent, 0), 20_000)
    heap: list[tuple[int, int, Box2]] = []
    seq = 0
    for a, b in pair_regions:
        if a.width == 0.0 and b.width == 0.0:
            continue
        heapq.heappush(heap, (0, seq, Box2(a, b)))
        seq += 1
    while heap:
        depth, _, box = heapq.heappop(heap)
        pops += 1
        if pops > pop_cap or not work.spend():
            hunt.frontier.append(box)
            hunt.frontier.extend(b for _, _, b in heap)
            break
        # Normalise to x <= y; chi is symmetric.
        bx, by = box.x, box.y
        if bx.lo > by.lo:
            bx, by = by, bx
        max_gap = by.hi - bx.lo
        min_gap = by.lo - bx.hi
        if max_gap < delta:
            hunt.frontier.append(Box2(bx, by))  # inside the diagonal band
            continue
        if min_gap >= delta:
            enc = chi_box(f, Box2(bx, by))
            if enc is not None and enc.hi <= 1.0:
                continue
            if enc is not None and enc.lo > 1.0:
                lb = _confirm_witness(f, bx.mid, by.mid, params.point_margin)
                if lb is not None:
                    hunt.falsified = (bx.mid, by.mid)
                    hunt.chi_lower_bound = lb
                    return hunt
        if depth >= params.max_depth:
            hunt.frontier.append(Box2(bx, by))
            continue
        if bx.width >= by.width:
            m = bx.mid
            children = (Box2(Interval(bx.lo, m), by), Box2(Interval(m, bx.hi), by))
        else:
            m = by.mid
            children = (Box2(bx, Interval(by.lo, m)), Box2(bx, Interval(m, by.hi)))
        for child in children:
            heapq.heappush(heap, (depth + 1, seq, child))
            seq += 1
    hunt.frontier.sort(key=_box_key)
    return hunt


def certify_membership(f: FunctionExpr, domain: Interval,
                       params: CertifyParams | None = None) -> Certificate:
    """Certify, falsify, or give up on nowhere-coexpansion over a window.

    Requires a complete critical-point report; certification is relative
    to the closed clipped window, which the certificate notes.
    """
    params = params or CertifyParams()
    t0 = time.perf_counter()
    crit = critical_points(f, domain)
    if not crit.complete:
        raise PreconditionUnmet(f"critical set not completely resolved: {crit.reason}")
    work = _Work(params.budget)
    notes = [f"analysis clipped to [{domain.lo}, {domain.hi}]"]
    frontier: list[Box2] = []
    witness = None
    lower = None
    verdict = CERTIFIED
    for comp in crit.components:
        edges = tuple(iso for iso in crit.isolating
                      if iso.hi >= comp.lo - 1e-9 and iso.lo <= comp.hi + 1e-9)
        bad = _prove_member_on(f, comp, params, work, edges)
        if not bad:
            continue
        notes.append(f"component [{comp.lo}, {comp.hi}]: Schwarzian/glue route "
                     f"left {len(bad)} region(s); chi search engaged")
        hunt = _chi_hunt(f, comp, bad, params, work)
        if hunt.falsified is not None:
            witness = hunt.falsified
            lower = hunt.chi_lower_bound
            verdict = FALSIFIED
            frontier = []
            break
        if hunt.frontier:
            verdict = UNKNOWN
            frontier.extend(hunt.frontier)
    frontier.sort(key=_box_key)
    return Certificate(
        verdict=verdict,
        params=params,
        components=crit.components,
        witness=witness,
        chi_lower_bound=lower,
        frontier=tuple(frontier),
        boxes_processed=work.spent,
        wall_time=time.perf_counter() - t0,
        notes=tuple(notes),
    )
