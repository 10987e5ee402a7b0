import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import WORKED_QUAD, convex_quads, random_convex_quad, random_rectangle, random_simple_quad, rotate
from quadgrid.errors import CellError, DegenerateGeometryError, NonconvexError
from quadgrid.geometry import Quad, Triangle, corner_triangle_areas, quad_area, side_lengths
from quadgrid.grid import StructuredGrid, uniform_grid
from quadgrid.quality import (
    HARMONIC_SIGMA,
    QuadMeasureKind,
    TriangleMeasureKind,
    better_than,
    cell_quality,
    grid_distortion,
    harmonic_mean_quality,
    is_acceptable,
    lo_quality,
    measure,
    minrect_aspect_ratio,
    minrect_min_triangle_quality,
    minrect_quality,
    rect_identity_gap,
    rectangles2015_quality,
    remacle_quality,
    robinson_aspect_ratio,
    tri_measure,
    vanrens_quality,
    wu_quality,
)

SQUARE = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))
RECT21 = ((0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0))
# C on the segment BD: the quad degenerates onto triangle ABD
TRIANGLE_LIKE = ((0.0, 0.0), (2.0, 0.0), (1.0, 1.0), (0.0, 2.0))
# right trapezoid with angles pi/2, pi/3, 2pi/3, pi/2
TRAPEZOID = ((0.0, 0.0), (2.0, 0.0), (2.0 - 1.0 / math.tan(math.pi / 3), 1.0), (0.0, 1.0))
DART = ((0.0, 0.0), (2.0, 0.0), (0.5, 0.5), (0.0, 2.0))
EQUILATERAL = ((0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2))
RIGHT_ISO = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))

RECTANGLE_ONES = [
    lo_quality,
    vanrens_quality,
    remacle_quality,
    wu_quality,
    minrect_quality,
    minrect_min_triangle_quality,
    rectangles2015_quality,
]


# -- triangle measures ---------------------------------------------------------


@pytest.mark.parametrize("kind", list(TriangleMeasureKind))
@pytest.mark.parametrize("scale", [1e-3, 1.0, 7.5e4])
def test_equilateral_is_one(kind, scale):
    t = [(scale * x, scale * y) for x, y in EQUILATERAL]
    assert tri_measure(t, kind) == pytest.approx(1.0, abs=1e-12)


def test_right_isosceles_values():
    assert tri_measure(RIGHT_ISO, TriangleMeasureKind.JOE) == pytest.approx(math.sqrt(3) / 2, rel=1e-14)
    assert tri_measure(RIGHT_ISO, TriangleMeasureKind.RADIUS_RATIO) == pytest.approx(
        2 * math.sqrt(2) - 2, rel=1e-14
    )
    # independent: inradius/circumradius from the Triangle dataclass
    t = Triangle.from_points(RIGHT_ISO)
    assert tri_measure(t, TriangleMeasureKind.RADIUS_RATIO) == pytest.approx(
        2 * t.inradius / t.circumradius, rel=1e-14
    )
    R = t.circumradius
    assert tri_measure(t, TriangleMeasureKind.SHEWCHUK) == pytest.approx(
        4 * math.sqrt(3) / 9 * 0.5 / R**2, rel=1e-14
    )
    assert tri_measure(t, TriangleMeasureKind.CAVENDISH) == pytest.approx(
        4 / math.sqrt(3) * 0.5 / 2.0, rel=1e-14
    )


@pytest.mark.parametrize("kind", list(TriangleMeasureKind))
def test_degenerate_triangle_is_zero(kind):
    assert tri_measure(((0, 0), (1, 1), (2, 2)), kind) == 0.0
    # measure tends to 0 as the apex flattens
    vals = [tri_measure(((0, 0), (1, 0), (0.5, h)), kind) for h in (1e-1, 1e-3, 1e-6)]
    assert vals[0] > vals[1] > vals[2] and vals[2] < 1e-5


@given(st.tuples(*[st.tuples(st.floats(-10, 10), st.floats(-10, 10))] * 3))
def test_triangle_measure_range(t):
    for kind in TriangleMeasureKind:
        v = tri_measure(t, kind)
        assert 0.0 <= v <= 1.0 + 1e-12


# -- aspect ratios ----------------------------------------------------------------


def test_robinson_examples():
    assert robinson_aspect_ratio(SQUARE) == 1.0
    assert robinson_aspect_ratio(((0, 0), (3, 0), (3, 0.5), (0, 0.5))) == pytest.approx(6.0)
    assert robinson_aspect_ratio(((0, 0), (0.5, 0), (0.5, 3), (0, 3))) == pytest.approx(6.0)


def test_robinson_worked_quad_depends_on_labelling():
    q = Quad.from_points(WORKED_QUAD)
    assert robinson_aspect_ratio(q.relabel(1)) == pytest.approx(1.00, abs=0.01)
    assert robinson_aspect_ratio(q) == pytest.approx(2.53, abs=0.01)


def test_robinson_rejects_vanishing_coefficient():
    # unit square labelled from (1, 0): the A->B midline is vertical, so e2 = f3 = 0
    with pytest.raises(DegenerateGeometryError):
        robinson_aspect_ratio(((1, 0), (1, 1), (0, 1), (0, 0)))


def test_minrect_aspect_examples():
    assert minrect_aspect_ratio(SQUARE) == pytest.approx(1.0)
    assert minrect_aspect_ratio(WORKED_QUAD) == pytest.approx(1.62, abs=0.01)
    rect = rotate(((0, 0), (3, 0), (3, 1), (0, 1)), 0.7, 2.0, (5, -3))
    assert minrect_aspect_ratio(rect) == pytest.approx(3.0, rel=1e-12)
    with pytest.raises(DegenerateGeometryError):
        minrect_aspect_ratio(((0, 0), (1, 0), (2, 0), (3, 0)))


def test_minrect_aspect_uses_hull_on_nonconvex():
    assert minrect_aspect_ratio(DART) == pytest.approx(minrect_aspect_ratio(((0, 0), (2, 0), (0, 2), (0, 1))))


# -- literature measures ----------------------------------------------------------


def test_lo_examples():
    assert lo_quality(SQUARE) == pytest.approx(1.0, rel=1e-14)
    assert lo_quality(RECT21) == pytest.approx(1.0, rel=1e-14)
    collapsed = ((0, 0), (2, 0), (2, 2), (1, 1))
    assert lo_quality(collapsed) == 0.0
    assert lo_quality(DART) < 0.0


def test_angle_measures_on_trapezoid():
    assert vanrens_quality(TRAPEZOID) == pytest.approx(4 / 9, rel=1e-12)
    assert remacle_quality(TRAPEZOID) == pytest.approx(2 / 3, rel=1e-12)
    assert wu_quality(TRAPEZOID) == pytest.approx(1 / 2, rel=1e-12)


def test_angle_measures_on_degenerate_and_reflex():
    assert vanrens_quality(TRIANGLE_LIKE) == pytest.approx(0.0, abs=1e-12)
    assert remacle_quality(TRIANGLE_LIKE) == pytest.approx(0.0, abs=1e-12)
    assert remacle_quality(DART) == 0.0


def test_wu_misses_degeneracy():
    # collapsed onto a right isosceles triangle: angles pi/4, pi/2, pi, pi/4
    assert wu_quality(TRIANGLE_LIKE) == pytest.approx((math.pi / 4) ** 2 / (math.pi / 2 * math.pi), rel=1e-12)
    # collapsed onto an equilateral triangle: angles pi/3, pi/3, pi, pi/3
    a, b, d = EQUILATERAL[0], EQUILATERAL[1], EQUILATERAL[2]
    mid = ((b[0] + d[0]) / 2, (b[1] + d[1]) / 2)
    assert wu_quality((a, b, mid, d)) == pytest.approx(1 / 3, rel=1e-12)


def test_wu_on_thin_sliver():
    # angles (e, pi - e, e, pi - e) sort to e*e / (pi - e)^2
    e = 0.01
    q = ((0, 0), (1, 0), (1 + math.cos(e), math.sin(e)), (math.cos(e), math.sin(e)))
    got = wu_quality(q)
    assert got == pytest.approx(e * e / (math.pi - e) ** 2, rel=1e-9)


def test_minrect2015_examples():
    assert minrect_quality(RECT21) == pytest.approx(1.0, rel=1e-12)
    assert minrect_quality(TRIANGLE_LIKE) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(NonconvexError):
        minrect_quality(DART)


def test_minrect_min_triangle_examples():
    assert minrect_min_triangle_quality(RECT21) == pytest.approx(1.0, rel=1e-12)
    assert minrect_min_triangle_quality(TRIANGLE_LIKE) == pytest.approx(0.0, abs=1e-12)
    assert minrect_min_triangle_quality(DART) < 0.0


def test_rectangles2015_examples():
    for s in (0.1, 1.0, 30.0):
        sq = [(s * x, s * y) for x, y in SQUARE]
        assert rectangles2015_quality(sq) == pytest.approx(1.0, rel=1e-14)
    assert rectangles2015_quality(RECT21) == pytest.approx(4 * 1 / math.sqrt(8 * 2), rel=1e-14)
    assert rectangles2015_quality(RECT21) == pytest.approx(1.0, rel=1e-14)
    assert rectangles2015_quality(TRIANGLE_LIKE) == 0.0
    assert rectangles2015_quality(DART) == 0.0
    # the unnormalized form sits at 1/2 on rectangles
    assert rectangles2015_quality(RECT21, printed=True) == pytest.approx(0.5, rel=1e-14)
    with pytest.raises(DegenerateGeometryError):
        rectangles2015_quality(((1, 1),) * 4)


def test_harmonic_mean_examples():
    assert HARMONIC_SIGMA[TriangleMeasureKind.JOE] == pytest.approx(2 / math.sqrt(3), rel=1e-14)
    assert HARMONIC_SIGMA[TriangleMeasureKind.RADIUS_RATIO] == pytest.approx(
        1 / (2 * math.sqrt(2) - 2), rel=1e-14
    )
    for kind in TriangleMeasureKind:
        assert harmonic_mean_quality(SQUARE, kind) == pytest.approx(1.0, abs=1e-14)
        assert harmonic_mean_quality(TRIANGLE_LIKE, kind) == 0.0
        assert harmonic_mean_quality(DART, kind) == 0.0


def test_harmonic_mean_matches_expanded_form():
    kind = TriangleMeasureKind.JOE
    A, B, C, D = WORKED_QUAD
    mus = [tri_measure(t, kind) for t in ((D, A, B), (A, B, C), (B, C, D), (C, D, A))]
    expected = HARMONIC_SIGMA[kind] * 4 / sum(1 / m for m in mus)
    assert harmonic_mean_quality(WORKED_QUAD, kind) == pytest.approx(expected, rel=1e-14)


# -- properties -------------------------------------------------------------------


def test_rectangle_characterization():
    rng = np.random.default_rng(11)
    for _ in range(200):
        r = random_rectangle(rng)
        for f in RECTANGLE_ONES:
            assert f(r) == pytest.approx(1.0, abs=1e-9), f.__name__
        assert abs(rect_identity_gap(r)) <= 1e-9


@settings(max_examples=300)
@given(convex_quads())
def test_convex_ranges(q):
    for kind in QuadMeasureKind:
        v = measure(q, kind)
        if kind.is_aspect_ratio:
            assert v >= 1.0 - 1e-12
        else:
            assert -1e-12 <= v <= 1.0 + 1e-9, kind
    assert rect_identity_gap(q) >= -1e-12


def test_nonconvex_ranges():
    rng = np.random.default_rng(5)
    kinds = [
        QuadMeasureKind.VAN_RENS,
        QuadMeasureKind.REMACLE,
        QuadMeasureKind.MINRECT2015_MINTRI,
        QuadMeasureKind.RECTANGLES2015,
        QuadMeasureKind.HARMONIC_JOE,
        QuadMeasureKind.HARMONIC_CAVENDISH,
    ]
    seen_nonconvex = 0
    for _ in range(2000):
        q = random_simple_quad(rng)
        convex = min(corner_triangle_areas(q)) > 0
        seen_nonconvex += not convex
        for kind in kinds:
            assert -1.0 <= measure(q, kind) <= 1.0 + 1e-9
        if not convex:
            assert lo_quality(q) <= 0.0
            assert rectangles2015_quality(q) == 0.0
    assert seen_nonconvex > 100


def test_degeneracy_detection_along_path():
    # slide C toward the diagonal BD; all but Wu go continuously to 0
    B, D = (2.0, 0.0), (0.0, 2.0)
    path = [1.0 + t for t in (1.0, 0.1, 1e-3, 1e-6)]
    detectors = [minrect_quality, rectangles2015_quality, lo_quality, vanrens_quality, remacle_quality]
    for f in detectors:
        vals = [f(((0, 0), B, (s, s), D)) for s in path]
        assert all(b < a for a, b in zip(vals, vals[1:])), f.__name__
        assert vals[-1] < 1e-5
    wu = [wu_quality(((0, 0), B, (s, s), D)) for s in path]
    assert min(wu) > 0.1


def test_cell_quality_reciprocal_for_aspect_ratios():
    q = ((0, 0), (4, 0), (4, 1), (0, 1))
    assert cell_quality(q, QuadMeasureKind.MINRECT_AR) == pytest.approx(0.25)
    assert cell_quality(q, "robinson-ar") == pytest.approx(0.25)
    assert cell_quality(q, QuadMeasureKind.LO) == measure(q, QuadMeasureKind.LO)


def test_parse_names():
    for kind in QuadMeasureKind:
        assert QuadMeasureKind.parse(kind.value) is kind
    assert QuadMeasureKind.parse("Harmonic_Joe") is QuadMeasureKind.HARMONIC_JOE
    with pytest.raises(ValueError, match="valid names"):
        QuadMeasureKind.parse("rectangle2015")


# -- grid distortion ---------------------------------------------------------------


def test_distortion_unit_squares():
    g = uniform_grid(6, 5, width=5.0, height=4.0)
    assert grid_distortion(g, QuadMeasureKind.RECTANGLES2015) == pytest.approx(1.0, rel=1e-14)


def test_distortion_of_two_by_one_rectangles():
    g = uniform_grid(4, 4, width=6.0, height=3.0)
    per_cell = harmonic_mean_quality(RECT21, TriangleMeasureKind.JOE)
    d = grid_distortion(g, QuadMeasureKind.HARMONIC_JOE)
    assert d == pytest.approx(1 / per_cell, rel=1e-12)
    assert d > 1.0


def test_distortion_names_collapsed_cell():
    nodes = uniform_grid(4, 4).nodes.copy()
    nodes[1, 1] = nodes[2, 2]
    g = StructuredGrid(nodes)
    with pytest.raises(CellError) as info:
        grid_distortion(g, QuadMeasureKind.RECTANGLES2015)
    assert (1, 1) in info.value.cells


def test_better_than_and_acceptability():
    g = uniform_grid(5, 5)
    nodes = g.nodes.copy()
    nodes[2, 2] += (0.05, 0.02)
    worse = StructuredGrid(nodes)
    assert better_than(g, worse, QuadMeasureKind.RECTANGLES2015)
    assert not better_than(worse, g, QuadMeasureKind.RECTANGLES2015)
    assert is_acceptable(0.97) and not is_acceptable(0.9)
    assert is_acceptable(0.9, (0.85, 1.0))


def test_random_quad_helper_is_convex():
    rng = np.random.default_rng(0)
    q = random_convex_quad(rng)
    assert quad_area(q) > 0 and min(side_lengths(q)) > 0
