import math
import random

import pytest

from coexpand import (
    AffineMap,
    DegenerateAffine,
    NotGlueable,
    affine_conjugate,
    chi,
    compose,
    eval_point,
    glue,
    jet_eval,
    parse,
)
from coexpand.expr import as_affine, size

from oracles import float_eval_or_none, random_smooth_tree


def test_compose_by_substitution():
    assert compose(parse("x^2"), parse("x + 1")) == parse("(x + 1)^2")
    f = parse("tanh(3*x - 1)")
    assert compose(parse("x"), f) == f
    got = eval_point(compose(parse("tanh(x)"), parse("2*x")), 0.3)
    assert got == pytest.approx(math.tanh(0.6), abs=1e-15)


def test_compose_associativity_up_to_evaluation():
    rng = random.Random(11)
    checked = 0
    while checked < 60:
        f = random_smooth_tree(rng, 2)
        g = random_smooth_tree(rng, 2)
        h = random_smooth_tree(rng, 2)
        x = rng.uniform(-1.0, 1.0)
        a = float_eval_or_none(compose(h, compose(g, f)), x)
        b = float_eval_or_none(compose(compose(h, g), f), x)
        if a is None or b is None or abs(a) > 1e6:
            continue
        assert a == pytest.approx(b, abs=1e-12 * (1.0 + abs(a)))
        checked += 1


def test_affine_conjugate_identity_maps():
    f = parse("tanh(x)")
    assert affine_conjugate(f, AffineMap(1.0, 0.0), AffineMap(1.0, 0.0)) == f
    with pytest.raises(DegenerateAffine):
        affine_conjugate(f, AffineMap(0.0, 1.0), AffineMap(1.0, 0.0))


def test_affine_conjugation_chi_identity_on_grid():
    # chi of A o f o B at (x, y) equals chi of f at (B x, B y).
    f = parse("exp(x) - 2")
    a = AffineMap(1.5, -0.25)
    b = AffineMap(0.75, 0.5)
    h = affine_conjugate(f, a, b)
    for x in (-1.5, -0.3, 0.4, 1.2):
        for y in (-0.9, 0.1, 0.9, 1.7):
            if x == y:
                continue
            assert chi(h, x, y) == pytest.approx(chi(f, b(x), b(y)), abs=1e-10)


def test_ga_construction_from_the_gluing_example():
    # g_a(x) = (id * tanh)(x - a) + a, built through composition for a = 1.
    idtanh = glue(parse("x"), parse("tanh(x)"))
    g1 = compose(idtanh, parse("x - 1")) + 1.0
    assert eval_point(g1, 0.25) == pytest.approx(0.25, abs=1e-15)
    assert eval_point(g1, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert eval_point(g1, 2.5) == pytest.approx(math.tanh(1.5) + 1.0, abs=1e-15)


def test_glue_examples_and_rejections():
    elu = glue(parse("exp(x) - 1"), parse("x"))
    assert eval_point(elu, -1.0) == pytest.approx(math.expm1(-1.0), abs=1e-15)
    assert eval_point(elu, 2.0) == 2.0

    with pytest.raises(NotGlueable) as err:
        glue(parse("2*x"), parse("tanh(x)"))
    assert err.value.which == "left"
    assert "slope" in err.value.reason

    with pytest.raises(NotGlueable):
        glue(parse("x + 1"), parse("x"))  # f(0) != 0


def test_glued_functions_are_c1_at_the_seam():
    for left, right in [("x", "tanh(x)"), ("exp(x) - 1", "x"), ("tanh(x)", "atan(x)")]:
        g = glue(parse(left), parse(right))
        jl = jet_eval(parse(left), 0.0)
        jr = jet_eval(parse(right), 0.0)
        assert jl.v == pytest.approx(0.0, abs=1e-12)
        assert jr.v == pytest.approx(0.0, abs=1e-12)
        assert jl.d1 == pytest.approx(1.0, abs=1e-12)
        assert jr.d1 == pytest.approx(1.0, abs=1e-12)
        seam = jet_eval(g, 0.0)
        assert seam.seam
        assert seam.v == pytest.approx(0.0, abs=1e-12)
        assert seam.d1 == pytest.approx(1.0, abs=1e-12)


def test_as_affine_folding():
    assert as_affine(parse("(x - 1) + 1")) == (1.0, 0.0)
    assert as_affine(parse("2*x + 3")) == (2.0, 3.0)
    assert as_affine(parse("x*x")) is None
    assert as_affine(parse("6/2")) == (0.0, 3.0)


def test_size_counts_nodes():
    assert size(parse("x")) == 1
    assert size(parse("tanh(2*x)")) == 4
