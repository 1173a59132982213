import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from hellylab import geometry
from hellylab.errors import PreconditionError, SchemaError, SizeLimitError
from hellylab.geometry import (AxisFlat, Ball, Box, VPolytope, axisflat_stabs_box, axisflat_transversal,
                               ball_point_transversal, balls_pairwise_meet, boxes_intersect, common_point,
                               interval, kflat_stabs_ball, lattice_point_in_intersection, line_meets,
                               line_transversal_disks, line_transversal_polygons, point_in_polytope,
                               polytopes_common_point, polytopes_intersect)

import oracles

F = Fraction
coord = st.integers(-6, 6).map(lambda v: F(v, 2))


@st.composite
def boxes(draw, d=2, min_size=1, max_size=6):
    n = draw(st.integers(min_size, max_size))
    out = []
    for _ in range(n):
        lo = [draw(coord) for _ in range(d)]
        hi = [a + draw(st.integers(0, 6).map(lambda v: F(v, 2))) for a in lo]
        out.append(Box(tuple(lo), tuple(hi)))
    return out


# -- types --------------------------------------------------------------------------------


def test_box_rejects_inverted_bounds():
    with pytest.raises(SchemaError):
        Box((1,), (0,))


def test_degenerate_box_allowed():
    b = Box((1, 2), (1, 2))
    assert b.contains((1, 2)) and not b.contains((1, 3))


def test_ball_rejects_negative_radius():
    with pytest.raises(SchemaError):
        Ball((0, 0), -1)


def test_axisflat_validation_and_dimension():
    f = AxisFlat(3, {0: 0, 2: 5})
    assert f.k == 1 and f.free == (1,)
    with pytest.raises(SchemaError):
        AxisFlat(2, {2: 0})


def test_from_json_round_trip():
    for obj in [Box((0, "1/2"), (1, 2)), VPolytope(((0, 0), (1, "3/4"))), Ball((1, 2), "1/3")]:
        assert geometry.from_json(obj.to_json()) == obj
    with pytest.raises(SchemaError):
        geometry.from_json({"type": "cone"})


def test_float_inputs_are_exact():
    assert Box((0.1,), (0.3,)).lo == (F("0.1"),)


# -- boxes and flats ----------------------------------------------------------------------


def test_boxes_intersect_examples():
    assert not boxes_intersect([Box((0, 0), (1, 1)), Box((2, 0), (3, 1))])
    assert boxes_intersect([Box((0, 0), (1, 1))])
    three = [Box((0, 0), (2, 2)), Box((1, 1), (3, 3)), Box(("3/2", "3/2"), ("5/2", "5/2"))]
    assert boxes_intersect(three)
    assert common_point(three) == (F(3, 2), F(3, 2))


def test_dimension_mismatch():
    with pytest.raises(PreconditionError):
        boxes_intersect([Box((0,), (1,)), Box((0, 0), (1, 1))])


def test_axisflat_stabs_box_examples():
    unit = Box((0, 0), (1, 1))
    assert axisflat_stabs_box(AxisFlat(2, {1: F(3, 4)}), unit)
    assert not axisflat_stabs_box(AxisFlat(2, {1: 2}), unit)
    assert axisflat_stabs_box(AxisFlat(3, {0: 0, 2: 5}), Box((-1, 0, 4), (1, 9, 6)))


def test_axisflat_transversal_examples():
    f = axisflat_transversal([Box((0, 0), (1, 1)), Box((2, F(1, 2)), (3, 2))], 1)
    assert f == AxisFlat(2, {1: F(1, 2)})
    assert axisflat_transversal([interval(0, 1), interval(2, 3)], 0) is None
    assert axisflat_transversal([Box((0, 0, 0), (1, 1, 1))], 2) is not None


@given(boxes(d=2, min_size=2))
def test_pairwise_intersecting_boxes_share_a_point(bs):
    pairwise = all(boxes_intersect([a, b]) for a, b in combinations(bs, 2))
    pt = common_point(bs)
    assert (pt is not None) == pairwise == boxes_intersect(bs)
    if pt is not None:
        assert oracles.box_point_in_all(bs, pt)


@given(boxes(d=3, max_size=5), st.integers(0, 2))
def test_axisflat_transversal_certificate(bs, k):
    f = axisflat_transversal(bs, k)
    if f is not None:
        assert f.k == k and all(axisflat_stabs_box(f, b) for b in bs)
    else:
        # no choice of fixed coordinates has overlapping projections
        for fixed in combinations(range(3), 3 - k):
            assert any(max(b.lo[j] for b in bs) > min(b.hi[j] for b in bs) for j in fixed)


# -- polytopes ----------------------------------------------------------------------------


def test_triangles_share_point():
    tris = [VPolytope(((0, 0), (2, 0), (0, 2))), VPolytope(((1, 1), (3, 1), (1, 3))),
            VPolytope(((0, 2), (2, 0), (2, 2)))]
    assert polytopes_intersect(tris)
    assert polytopes_common_point(tris) == (1, 1)
    # rasterized membership cross-check
    hits = [(F(x, 4), F(y, 4)) for x in range(13) for y in range(13)
            if all(point_in_polytope((F(x, 4), F(y, 4)), t) for t in tris)]
    assert hits == [(1, 1)]


def test_intervals_and_disjoint_segments():
    iv = [VPolytope(((0,), (2,))), VPolytope(((1,), (3,))), VPolytope(((F(3, 2),), (4,)))]
    assert polytopes_intersect(iv)
    segs = [VPolytope(((0, 0), (1, 0))), VPolytope(((0, 1), (1, 1)))]
    assert not polytopes_intersect(segs)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=5),
       st.tuples(st.integers(-8, 8), st.integers(-8, 8)))
def test_point_in_polygon_matches_lp(pts, probe):
    P = VPolytope(tuple(pts))
    x = (F(probe[0], 2), F(probe[1], 2))
    assert point_in_polytope(x, P) == polytopes_intersect([P, VPolytope((x,))])


@given(boxes(d=2, max_size=4))
def test_polytope_view_of_boxes_agrees(bs):
    assert polytopes_intersect([geometry.as_polytope(b) for b in bs]) == boxes_intersect(bs)


# -- lattice points -----------------------------------------------------------------------


def test_lattice_examples():
    assert lattice_point_in_intersection([Box(("1/2", "1/2"), ("3/2", "3/2")),
                                          Box(("9/10", "9/10"), ("21/10", "21/10"))]) == (1, 1)
    assert lattice_point_in_intersection([VPolytope((("1/4", "1/4"), ("3/4", "3/4")))]) is None
    assert lattice_point_in_intersection([Box((0, 0, 0), (1, 1, 1))]) == (0, 0, 0)


def test_lattice_limit():
    with pytest.raises(SizeLimitError):
        lattice_point_in_intersection([Box((0, 0), (2000, 2000))])


@given(boxes(d=2, max_size=4))
def test_lattice_point_membership(bs):
    pt = lattice_point_in_intersection(bs)
    brute = [(F(x), F(y)) for x in range(-4, 8) for y in range(-4, 8) if oracles.box_point_in_all(bs, (x, y))]
    if pt is None:
        assert brute == []
    else:
        assert all(v.denominator == 1 for v in pt) and oracles.box_point_in_all(bs, pt)
        assert pt == min(brute)


# -- lines --------------------------------------------------------------------------------


def square(x, y):
    return VPolytope(((x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)))


def test_square_translates_have_line():
    sq = [square(0, 0), square(2, 0), square(4, 0)]
    line = line_transversal_polygons(sq)
    assert line is not None and all(line_meets(line, P) for P in sq)
    assert line_meets(((F(0), F(1)), F(1, 2)), sq[0])


def test_pushed_out_triangle_sides_have_no_line():
    # three short segments near the midpoints of a large triangle's sides, pushed outward
    segs = [VPolytope(((-1, -1), (1, -1))), VPolytope(((5, 4), (6, 5))), VPolytope(((-6, 5), (-5, 4)))]
    assert all(line_transversal_polygons(list(p)) is not None for p in combinations(segs, 2))
    assert line_transversal_polygons(segs) is None
    assert not oracles.sweep_line_transversal(segs)[0]


def test_single_polygon_line():
    line = line_transversal_polygons([square(0, 0)])
    assert line is not None and line_meets(line, square(0, 0))


def test_line_transversal_matches_sweep_oracle():
    rng = random.Random(20240607)
    disagreements = 0
    band = 0.02
    for _ in range(200):
        polys = []
        for _ in range(rng.randint(2, 4)):
            cx, cy = rng.randint(-6, 6), rng.randint(-6, 6)
            pts = tuple((cx + rng.randint(0, 3), cy + rng.randint(0, 3)) for _ in range(rng.randint(1, 4)))
            polys.append(VPolytope(pts))
        exact = line_transversal_polygons(polys)
        found, slack = oracles.sweep_line_transversal(polys, samples=720)
        if exact is not None:
            assert all(line_meets(exact, P) for P in polys)
        if abs(slack) > band and found != (exact is not None):
            disagreements += 1
    assert disagreements == 0


# -- balls --------------------------------------------------------------------------------


def test_kflat_stabs_ball_examples():
    assert kflat_stabs_ball(AxisFlat(2, {1: 0}), Ball((5, 3), 3))
    assert not kflat_stabs_ball(AxisFlat(2, {1: 0}), Ball((0, 4), 3))
    assert kflat_stabs_ball(AxisFlat(2, {0: 7, 1: -2}), Ball((7, -2), 0))


def test_pairwise_ball_meeting_is_exact():
    assert balls_pairwise_meet(Ball((0, 0), 1), Ball((2, 0), 1))
    assert not balls_pairwise_meet(Ball((0, 0), 1), Ball((3, 0), 1))


def test_ball_point_transversal_examples():
    tangent = ball_point_transversal([Ball((0, 0), 1), Ball((2, 0), 1)])
    assert tangent.found
    assert math.dist(tangent.point, (1, 0)) < 1e-4
    assert not ball_point_transversal([Ball((0, 0), 1), Ball((3, 0), 1)]).found
    h = F(866025403784, 10 ** 12)  # sqrt(3)/2, rational stand-in
    tri = [Ball((0, 0), 1), Ball((1, 0), 1), Ball((F(1, 2), h), 1)]
    res = ball_point_transversal(tri)
    assert res.status == geometry.WITNESS
    assert all(math.dist(res.point, (float(b.center[0]), float(b.center[1]))) <= 1 + 1e-9 for b in tri)


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 4)), min_size=1, max_size=4))
def test_ball_point_transversal_sound(raw):
    balls = [Ball((x, y), r) for x, y, r in raw]
    res = ball_point_transversal(balls)
    if res.status == geometry.WITNESS:
        for b in balls:
            assert math.dist(res.point, tuple(map(float, b.center))) <= float(b.radius) + 1e-6
    if res.status == geometry.NONE:
        assert res.gap > 0


def test_line_transversal_disks():
    row = [Ball((0, 0), 1), Ball((5, 0), 1), Ball((10, 1), 1)]
    assert line_transversal_disks(row).found
    spread = [Ball((0, 0), F(1, 2)), Ball((10, 0), F(1, 2)), Ball((5, 9), F(1, 2))]
    assert not line_transversal_disks(spread).found
