import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fatpath.geometry import (
    Ball,
    Box,
    GeometricInstance,
    empirical_growth,
    generate_instance,
    instance_from_json,
    instance_to_json,
    intersection_graph,
    objects_intersect,
    validate_fatness,
)
from fatpath.graphs import Graph


def test_fatness_unit_ball():
    assert validate_fatness(Ball((0.0, 0.0), 1.0), beta=1.0, d=2)


def test_fatness_oversized_ball():
    assert not validate_fatness(Ball((0.0, 0.0), 3.0), beta=2.0, d=2)


def test_fatness_unit_box():
    # circumradius sqrt(2) <= 1.5, inradius 1
    assert validate_fatness(Box((0.0, 0.0), (1.0, 1.0)), beta=1.5, d=2)
    assert not validate_fatness(Box((0.0, 0.0), (1.0, 1.0)), beta=1.3, d=2)


def test_fatness_dimension_mismatch():
    with pytest.raises(ValueError):
        validate_fatness(Ball((0.0, 0.0, 0.0), 1.0), beta=1.0, d=2)


def test_tangent_balls_intersect():
    inst = GeometricInstance(
        dimension=2, beta=1.0, seed=0,
        objects=(Ball((0.0, 0.0), 1.0), Ball((2.0, 0.0), 1.0)),
    )
    g = intersection_graph(inst)
    assert g.n == 2 and g.has_edge(0, 1)


def test_single_object_k1():
    inst = GeometricInstance(2, 1.0, (Ball((0.0, 0.0), 1.0),), 0)
    g = intersection_graph(inst)
    assert g.n == 1 and g.m == 0


def _exact_ball_ball(a: Ball, b: Ball) -> bool:
    # rational re-evaluation; centers/radii live on the 2^-20 grid exactly
    d2 = sum(
        (Fraction(x) - Fraction(y)) ** 2 for x, y in zip(a.center, b.center)
    )
    return d2 <= (Fraction(a.radius) + Fraction(b.radius)) ** 2


def _exact_intersect(a, b) -> bool:
    if isinstance(a, Ball) and isinstance(b, Ball):
        return _exact_ball_ball(a, b)
    if isinstance(a, Box) and isinstance(b, Box):
        return all(
            abs(Fraction(ca) - Fraction(cb)) <= Fraction(ha) + Fraction(hb)
            for ca, cb, ha, hb in zip(a.center, b.center, a.half_extents, b.half_extents)
        )
    ball, box = (a, b) if isinstance(a, Ball) else (b, a)
    d2 = Fraction(0)
    for c, bc, h in zip(ball.center, box.center, box.half_extents):
        lo, hi = Fraction(bc) - Fraction(h), Fraction(bc) + Fraction(h)
        x = min(max(Fraction(c), lo), hi)
        d2 += (Fraction(c) - x) ** 2
    return d2 <= Fraction(ball.radius) ** 2


def test_intersection_graph_matches_exact_rational_oracle():
    inst = generate_instance(d=2, beta=2.0, n=50, box_side=18.0, shape_mix=0.5, seed=11)
    g = intersection_graph(inst)
    for i in range(50):
        for j in range(i + 1, 50):
            assert g.has_edge(i, j) == _exact_intersect(inst.objects[i], inst.objects[j])


def test_generator_beta_one_forces_unit_disks():
    inst = generate_instance(d=2, beta=1.0, n=1, box_side=10.0, shape_mix=1.0, seed=7)
    (obj,) = inst.objects
    assert isinstance(obj, Ball) and obj.radius == 1.0


def test_generator_deterministic():
    a = generate_instance(d=2, beta=2.0, n=30, box_side=15.0, shape_mix=0.5, seed=42)
    b = generate_instance(d=2, beta=2.0, n=30, box_side=15.0, shape_mix=0.5, seed=42)
    assert instance_to_json(a) == instance_to_json(b)


def test_unit_ball_distance_rule():
    # beta=1: edge iff center distance <= 2
    inst = generate_instance(d=2, beta=1.0, n=40, box_side=14.0, seed=5)
    g = intersection_graph(inst)
    for i in range(40):
        for j in range(i + 1, 40):
            d = math.dist(inst.objects[i].center, inst.objects[j].center)
            assert g.has_edge(i, j) == (d <= 2.0)


def test_generator_degree_obeys_packing_bound():
    # similarly sized objects in a square: degree bounded by area packing
    inst = generate_instance(d=2, beta=2.0, n=200, box_side=40.0, shape_mix=0.5, seed=3)
    g = intersection_graph(inst)
    # neighbors of v fit in a radius-4beta disk, each containing a disjoint
    # unit-ball core: at most (4*beta+1)^2 of them
    cap = (4 * 2.0 + 1) ** 2
    assert g.max_degree() <= cap


def test_growth_k1():
    assert empirical_growth(Graph(1, []), 3) == [(1, 1), (2, 1), (3, 1)]


def test_growth_p5():
    p5 = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert empirical_growth(p5, 3) == [(1, 1), (2, 3), (3, 5)]


def test_json_round_trip():
    inst = generate_instance(d=3, beta=2.5, n=12, box_side=9.0, shape_mix=0.4, seed=9)
    again = instance_from_json(instance_to_json(inst))
    assert instance_to_json(again) == instance_to_json(inst)
    assert intersection_graph(again).m == intersection_graph(inst).m


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_intersection_symmetric_irreflexive(seed):
    inst = generate_instance(d=2, beta=1.5, n=12, box_side=8.0, shape_mix=0.5, seed=seed)
    g = intersection_graph(inst)
    for u, v in g.edges():
        assert u != v
        assert objects_intersect(inst.objects[u], inst.objects[v])
        assert objects_intersect(inst.objects[v], inst.objects[u])
