import math
import random

import pytest

from coexpand import DomainViolation, Interval, eval_point, interval_eval, jet_eval, parse

from oracles import central_d1, central_d2, central_d3, random_tree, random_smooth_tree


def test_jet_examples():
    assert jet_eval(parse("x^2"), 3.0).as_tuple() == (9.0, 6.0, 2.0, 0.0)
    assert jet_eval(parse("tanh(x)"), 0.0).as_tuple() == (0.0, 1.0, 0.0, -2.0)
    assert jet_eval(parse("exp(x)"), 0.0).as_tuple() == (1.0, 1.0, 1.0, 1.0)


def test_interval_eval_examples():
    assert interval_eval(parse("2*x + 1"), Interval(0.0, 1.0)) == Interval(1.0, 3.0)
    enc = interval_eval(parse("tanh(x)"), Interval(-1.0, 1.0))
    assert enc.contains(-0.7615941559557649) and enc.contains(0.7615941559557649)
    assert enc.width <= 1.53
    with pytest.raises(DomainViolation):
        interval_eval(parse("log(x)"), Interval(-1.0, 1.0))


def test_jets_match_central_differences():
    rng = random.Random(99)
    h = 1e-4
    checked = 0
    while checked < 200:
        f = random_smooth_tree(rng, 3)
        x = rng.uniform(-2.0, 2.0)
        try:
            j = jet_eval(f, x)
        except DomainViolation:
            continue
        vals = (j.v, j.d1, j.d2, j.d3)
        if any(not math.isfinite(v) or abs(v) > 1e4 for v in vals):
            continue

        def fn(t):
            return eval_point(f, t)

        assert abs(j.d1 - central_d1(fn, x, h)) <= 1e-6 * (1.0 + abs(j.d1))
        assert abs(j.d2 - central_d2(fn, x, h)) <= 1e-4 * (1.0 + abs(j.d2))
        assert abs(j.d3 - central_d3(fn, x, h)) <= 5e-2 * (1.0 + abs(j.d3))
        checked += 1


def test_enclosure_property_random_trees():
    # eval at an inner point lies inside the interval evaluation, and the
    # point jet lies inside the interval jet, componentwise.
    rng = random.Random(4242)
    checked = 0
    while checked < 10_000:
        f = random_tree(rng, 3)
        lo = rng.uniform(-3.0, 3.0)
        w = rng.uniform(0.0, 1.0)
        box = Interval(lo, lo + w)
        x = lo + rng.random() * w
        try:
            enc = interval_eval(f, box)
            v = eval_point(f, x)
        except DomainViolation:
            continue
        if not math.isfinite(v):
            continue
        assert enc.widen(1e-12 * (1.0 + abs(v))).contains(v), (f, x, box, v, enc)
        checked += 1


def test_interval_jets_enclose_point_jets():
    rng = random.Random(5151)
    checked = 0
    while checked < 2000:
        f = random_smooth_tree(rng, 3)
        lo = rng.uniform(-2.0, 2.0)
        w = rng.uniform(0.0, 0.5)
        box = Interval(lo, lo + w)
        x = lo + rng.random() * w
        try:
            jp = jet_eval(f, x)
            ji = jet_eval(f, box)
        except DomainViolation:
            continue
        if any(not math.isfinite(v) for v in jp.as_tuple()):
            continue
        for pv, iv in zip(jp.as_tuple(), ji.as_tuple()):
            assert iv.widen(1e-10 * (1.0 + abs(pv))).contains(pv)
        checked += 1


def test_glue_jets_one_sided_at_seam():
    from coexpand import glue

    elu = glue(parse("exp(x) - 1"), parse("x"))
    left = jet_eval(elu, -1e-12)
    right = jet_eval(elu, 1e-12)
    seam = jet_eval(elu, 0.0)
    assert not left.seam and not right.seam and seam.seam
    assert seam.d1 == pytest.approx(1.0, abs=1e-12)
    # interval jets across the seam hull both one-sided values
    ji = jet_eval(elu, Interval(-0.1, 0.1))
    assert ji.seam
    assert ji.d2.contains(0.0)  # right branch f'' = 0
    assert ji.d2.contains(math.exp(-0.05) * 0.9)  # left branch values


def test_overflow_degrades_to_infinite_enclosures():
    f = parse("exp(exp(exp(x)))")
    enc = interval_eval(f, Interval(4.0, 5.0))
    assert enc.hi == math.inf
