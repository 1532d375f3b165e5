import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coexpand import DomainViolation, Interval, Box2, split
from coexpand.interval import erf_i, exp_i, log_i, sech2_i, sin_i, sqrt_i, tanh_i

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@st.composite
def intervals(draw):
    a = draw(finite)
    b = draw(finite)
    return Interval(min(a, b), max(a, b))


def test_affine_evaluation_is_exact():
    x = Interval(0.0, 1.0)
    assert x * 2.0 + 1.0 == Interval(1.0, 3.0)


def test_empty_interval_is_distinct_and_absorbing():
    e = Interval.empty()
    assert e.is_empty
    assert (e + Interval(0, 1)).is_empty
    assert (Interval(0, 1) * e).is_empty
    assert not Interval(0.0, 0.0).is_empty


@settings(max_examples=300, deadline=None)
@given(intervals(), intervals(), st.floats(0, 1), st.floats(0, 1))
def test_arithmetic_encloses_samples(a, b, ta, tb):
    # rounding in the sample construction itself can overshoot the ends
    x = min(max(a.lo + ta * (a.hi - a.lo), a.lo), a.hi)
    y = min(max(b.lo + tb * (b.hi - b.lo), b.lo), b.hi)
    assert (a + b).contains(x + y)
    assert (a - b).contains(x - y)
    assert (a * b).contains(x * y)
    if not b.straddles_zero():
        assert (a / b).contains(x / y)


@settings(max_examples=200, deadline=None)
@given(intervals(), st.floats(0, 1), st.integers(min_value=0, max_value=6))
def test_pow_int_encloses_samples(a, t, n):
    x = min(max(a.lo + t * (a.hi - a.lo), a.lo), a.hi)
    assert a.pow_int(n).contains(x ** n)


def test_division_by_zero_straddling_interval_raises():
    with pytest.raises(DomainViolation):
        Interval(1.0, 2.0) / Interval(-1.0, 1.0)
    with pytest.raises(DomainViolation):
        Interval(-1.0, 1.0).pow_int(-2)


def test_kernel_examples():
    t = tanh_i(Interval(-1.0, 1.0))
    assert t.contains(math.tanh(-1.0)) and t.contains(math.tanh(1.0))
    assert t.width <= 1.53
    with pytest.raises(DomainViolation):
        log_i(Interval(-1.0, 1.0))
    assert exp_i(Interval(0.0, 0.0)).contains(1.0)
    assert sqrt_i(Interval(4.0, 9.0)).contains(2.0)
    assert erf_i(Interval(-10.0, 10.0)).hi <= 1.0
    s = sin_i(Interval(0.0, 4.0))  # contains pi/2, so the max must be 1
    assert s.hi == 1.0
    assert sech2_i(Interval(0.0, 0.0)).contains(1.0)
    assert sech2_i(Interval(5.0, 6.0)).hi < 1e-3


@settings(max_examples=200, deadline=None)
@given(st.floats(-30, 30, allow_nan=False), st.floats(0, 2))
def test_transcendental_kernels_enclose_point_values(x, w):
    box = Interval(x, x + w)
    for kern, fn in ((tanh_i, math.tanh), (exp_i, math.exp), (erf_i, math.erf),
                     (sin_i, math.sin)):
        enc = kern(box)
        assert enc.contains(fn(x))
        assert enc.contains(fn(x + w))


def test_monotone_width_for_single_primitives():
    # a nested input interval cannot produce a wider enclosure (+4 ulp)
    outer = Interval(-2.0, 2.0)
    inner = Interval(-1.0, 0.5)
    for kern in (tanh_i, exp_i, erf_i):
        wo = kern(outer).width
        wi = kern(inner).width
        assert wi <= wo + 4 * math.ulp(wo)


def test_split_examples():
    a, b = split(Box2(Interval(0, 2), Interval(0, 1)))
    assert a == Box2(Interval(0, 1), Interval(0, 1))
    assert b == Box2(Interval(1, 2), Interval(0, 1))
    a, b = split(Box2(Interval(0, 1), Interval(0, 4)))
    assert a.y == Interval(0, 2) and b.y == Interval(2, 4)


@settings(max_examples=200, deadline=None)
@given(intervals(), intervals())
def test_split_children_cover_parent(x, y):
    if x.width == 0 and y.width == 0:
        return
    box = Box2(x, y)
    a, b = split(box)
    assert a.x.width <= box.x.width and a.y.width <= box.y.width
    assert a.x.hull(b.x) == box.x
    assert a.y.hull(b.y) == box.y
