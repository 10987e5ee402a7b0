"""Quality measures for quadrilaterals and the triangle measures they build on.

Each quad measure takes a Quad (or four counterclockwise points) and returns a
float.  The two aspect ratios return values >= 1 (1 is ideal); every other
measure is normalized so that 1 is the ideal shape.  ``cell_quality`` maps
all of them onto the same "1 is best" scale for grid-level statistics.
"""

from __future__ import annotations

import enum
import math

from .errors import CellError, DegenerateGeometryError, NonconvexError, QuadGridError
from .geometry import (
    Quad,
    Triangle,
    area_tolerance,
    as_quad,
    bilinear_coeffs,
    convex_hull,
    corner_triangle_areas,
    cross,
    inner_angles,
    min_area_rect,
    quad_area,
    side_lengths,
)

SQRT3 = math.sqrt(3.0)
HALF_PI = 0.5 * math.pi
DEFAULT_ACCEPTABILITY = (0.95, 1.0)


class TriangleMeasureKind(enum.Enum):
    JOE = "joe"
    RADIUS_RATIO = "radius-ratio"
    SHEWCHUK = "shewchuk"
    CAVENDISH = "cavendish"


class QuadMeasureKind(enum.Enum):
    ROBINSON_AR = "robinson-ar"
    MINRECT_AR = "minrect-ar"
    LO = "lo"
    VAN_RENS = "vanrens"
    REMACLE = "remacle"
    WU = "wu"
    MINRECT2015 = "minrect2015"
    MINRECT2015_MINTRI = "minrect2015-mintri"
    RECTANGLES2015 = "rectangles2015"
    HARMONIC_JOE = "harmonic-joe"
    HARMONIC_RADIUS_RATIO = "harmonic-radius-ratio"
    HARMONIC_SHEWCHUK = "harmonic-shewchuk"
    HARMONIC_CAVENDISH = "harmonic-cavendish"

    @property
    def triangle_kind(self) -> TriangleMeasureKind | None:
        return _HARMONIC_KINDS.get(self)

    @property
    def is_aspect_ratio(self) -> bool:
        return self in (QuadMeasureKind.ROBINSON_AR, QuadMeasureKind.MINRECT_AR)

    @classmethod
    def parse(cls, name: str) -> "QuadMeasureKind":
        key = name.strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        valid = ", ".join(k.value for k in cls)
        raise ValueError(f"unknown measure {name!r}; valid names: {valid}")


_HARMONIC_KINDS = {
    QuadMeasureKind.HARMONIC_JOE: TriangleMeasureKind.JOE,
    QuadMeasureKind.HARMONIC_RADIUS_RATIO: TriangleMeasureKind.RADIUS_RATIO,
    QuadMeasureKind.HARMONIC_SHEWCHUK: TriangleMeasureKind.SHEWCHUK,
    QuadMeasureKind.HARMONIC_CAVENDISH: TriangleMeasureKind.CAVENDISH,
}


# -- triangle measures ------------------------------------------------------


def _tri_measure_signed(p0, p1, p2, kind: TriangleMeasureKind) -> float:
    """Triangle measure carrying the sign of the oriented area (0 if degenerate)."""
    A = 0.5 * cross(p0, p1, p2)
    if abs(A) <= area_tolerance((p0, p1, p2)):
        return 0.0
    l1 = math.hypot(p2[0] - p1[0], p2[1] - p1[1])
    l2 = math.hypot(p0[0] - p2[0], p0[1] - p2[1])
    l3 = math.hypot(p1[0] - p0[0], p1[1] - p0[1])
    if kind is TriangleMeasureKind.JOE:
        return 4.0 * SQRT3 * A / (l1 * l1 + l2 * l2 + l3 * l3)
    if kind is TriangleMeasureKind.RADIUS_RATIO:
        # 2r/R with r = |A|/s and R = l1 l2 l3 / (4|A|)
        s = 0.5 * (l1 + l2 + l3)
        return 8.0 * A * abs(A) / (s * l1 * l2 * l3)
    if kind is TriangleMeasureKind.SHEWCHUK:
        R = l1 * l2 * l3 / (4.0 * abs(A))
        return (4.0 * SQRT3 / 9.0) * A / (R * R)
    if kind is TriangleMeasureKind.CAVENDISH:
        lmax = max(l1, l2, l3)
        return (4.0 / SQRT3) * A / (lmax * lmax)
    raise ValueError(f"unknown triangle measure {kind!r}")


def tri_measure(t, kind: TriangleMeasureKind) -> float:
    """Shape quality of a triangle in [0, 1]; 1 on equilateral triangles.

    Degenerate triangles return 0 rather than raising.  Orientation is
    ignored here; the harmonic-mean quad measure uses the signed variant.
    """
    if not isinstance(t, Triangle):
        t = Triangle.from_points(t)
    return abs(_tri_measure_signed(t.a, t.b, t.c, kind))


# 1 / measure of the right isosceles triangle, i.e. of each corner triangle of a square
_RIGHT_ISOSCELES = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))
HARMONIC_SIGMA = {
    kind: 1.0 / _tri_measure_signed(*_RIGHT_ISOSCELES, kind) for kind in TriangleMeasureKind
}


def _corner_triangles(q):
    A, B, C, D = q
    return ((D, A, B), (A, B, C), (B, C, D), (C, D, A))


# -- measures from the literature -------------------------------------------


def robinson_aspect_ratio(q) -> float:
    """Aspect ratio of the axis-parallel midpoint rectangle, max(|e2/f3|, |f3/e2|).

    Depends on the coordinate axes and on which vertex is labelled A.
    """
    v = as_quad(q)
    c = bilinear_coeffs(v)
    tol = 1e-14 * max(abs(c.e2), abs(c.f3), 1e-300)
    if abs(c.e2) <= tol or abs(c.f3) <= tol:
        raise DegenerateGeometryError("bilinear coefficient e2 or f3 vanishes")
    r = abs(c.e2 / c.f3)
    return max(r, 1.0 / r)


def minrect_aspect_ratio(q) -> float:
    """Longest over shortest side of the minimum-area rectangle around the hull."""
    return min_area_rect(convex_hull(as_quad(q))).aspect


def lo_quality(q) -> float:
    """g1*g2/(g3*g4) over the sorted Joe measures of the corner triangles.

    Signed areas make the value nonpositive for nonconvex quads.
    """
    v = as_quad(q)
    g = sorted(
        _tri_measure_signed(*t, TriangleMeasureKind.JOE) for t in _corner_triangles(v)
    )
    den = g[2] * g[3]
    if den == 0.0:
        return 0.0
    return g[0] * g[1] / den


def vanrens_quality(q) -> float:
    out = 1.0
    for theta in inner_angles(q):
        out *= 1.0 - abs((HALF_PI - theta) / HALF_PI)
    return out


def remacle_quality(q) -> float:
    dev = max(abs(HALF_PI - theta) for theta in inner_angles(q))
    return max(1.0 - dev / HALF_PI, 0.0)


def wu_quality(q) -> float:
    """theta1*theta2/(theta3*theta4) over sorted inner angles.

    Stays well above 0 when a quad collapses onto a triangle (angles of the
    triangle plus one straight angle), so it does not flag degeneracy.
    """
    t = sorted(inner_angles(q))
    return t[0] * t[1] / (t[2] * t[3])


# -- minimum-rectangle and rectangle measures --------------------------------


def _require_convex(v, what):
    areas = corner_triangle_areas(v)
    if min(areas) < -area_tolerance(v):
        raise NonconvexError(f"{what} is defined on convex quadrilaterals only")
    return areas


def minrect_quality(q) -> float:
    """(2*a_c - a_R)/a_R with a_R the minimum enclosing rectangle area.

    1 on rectangles, 0 once the quad collapses onto a triangle.
    """
    v = as_quad(q)
    _require_convex(v, "minrect2015")
    a_c = quad_area(v)
    a_R = min_area_rect(convex_hull(v)).area
    return (2.0 * a_c - a_R) / a_R


def minrect_min_triangle_quality(q) -> float:
    """2*a_min/a_R, a_min the smallest signed corner-triangle area.

    Nonconvex quads give a value <= 0 (the rectangle is taken on the hull).
    """
    v = as_quad(q)
    a_min = min(corner_triangle_areas(v))
    a_R = min_area_rect(convex_hull(v)).area
    return 2.0 * a_min / a_R


def rectangles2015_quality(q, printed: bool = False) -> float:
    """4*a_min / sqrt((a^2+c^2)(b^2+d^2)), clamped at 0 for nonconvex quads.

    ``printed=True`` gives the unnormalized 2*a_min/sqrt(...) form, whose
    value on rectangles is 1/2.
    """
    v = as_quad(q)
    a, b, c, d = side_lengths(v)
    den = math.sqrt((a * a + c * c) * (b * b + d * d))
    if den == 0.0:
        raise DegenerateGeometryError("all sides have zero length")
    a_min = max(min(corner_triangle_areas(v)), 0.0)
    return (2.0 if printed else 4.0) * a_min / den


def harmonic_mean_quality(q, kind: TriangleMeasureKind) -> float:
    """Normalized harmonic mean of a triangle measure over the four corner
    triangles; equals 1 on squares.  Zero if any corner triangle is
    degenerate or inverted."""
    v = as_quad(q)
    inv = 0.0
    for t in _corner_triangles(v):
        mu = _tri_measure_signed(*t, kind)
        if mu <= 0.0:
            return 0.0
        inv += 1.0 / mu
    return HARMONIC_SIGMA[kind] * 4.0 / inv


def rect_identity_gap(q) -> float:
    """Relative gap in sqrt((a^2+c^2)(b^2+d^2)) >= 2*a_c; zero iff rectangle."""
    a, b, c, d = side_lengths(q)
    rhs = math.sqrt((a * a + c * c) * (b * b + d * d))
    return (rhs - 2.0 * quad_area(q)) / rhs


# -- dispatch ---------------------------------------------------------------


_DISPATCH = {
    QuadMeasureKind.ROBINSON_AR: robinson_aspect_ratio,
    QuadMeasureKind.MINRECT_AR: minrect_aspect_ratio,
    QuadMeasureKind.LO: lo_quality,
    QuadMeasureKind.VAN_RENS: vanrens_quality,
    QuadMeasureKind.REMACLE: remacle_quality,
    QuadMeasureKind.WU: wu_quality,
    QuadMeasureKind.MINRECT2015: minrect_quality,
    QuadMeasureKind.MINRECT2015_MINTRI: minrect_min_triangle_quality,
    QuadMeasureKind.RECTANGLES2015: rectangles2015_quality,
}


def measure(q, kind: QuadMeasureKind) -> float:
    """Raw value of ``kind`` on ``q``."""
    if isinstance(kind, str):
        kind = QuadMeasureKind.parse(kind)
    tri = kind.triangle_kind
    if tri is not None:
        return harmonic_mean_quality(q, tri)
    return _DISPATCH[kind](q)


def cell_quality(q, kind: QuadMeasureKind) -> float:
    """Measure on a "1 is ideal, larger is better" scale.

    Aspect ratios are reported as their reciprocal, in (0, 1].
    """
    if isinstance(kind, str):
        kind = QuadMeasureKind.parse(kind)
    value = measure(q, kind)
    return 1.0 / value if kind.is_aspect_ratio else value


def cell_values(g, kind: QuadMeasureKind) -> list[tuple[tuple[int, int], float]]:
    """``cell_quality`` for every cell of a structured grid, row-major.

    A cell whose evaluation raises is reported through CellError with its (i, j).
    """
    out = []
    for ij, q in g.cells():
        try:
            out.append((ij, cell_quality(q, kind)))
        except QuadGridError as exc:
            raise CellError(f"{kind.value if isinstance(kind, QuadMeasureKind) else kind} "
                            f"undefined ({exc})", [ij]) from exc
    return out


def grid_distortion(g, kind: QuadMeasureKind) -> float:
    """Mean reciprocal cell quality; 1 for a grid of ideal cells, lower is better."""
    if isinstance(kind, str):
        kind = QuadMeasureKind.parse(kind)
    values = cell_values(g, kind)
    bad = [ij for ij, v in values if not v > 0.0]
    if bad:
        raise CellError(f"grid not admissible for {kind.value}: quality <= 0", bad)
    return math.fsum(1.0 / v for _, v in values) / len(values)


def better_than(g_hat, g_bar, kind: QuadMeasureKind) -> bool:
    """True when ``g_hat`` has strictly lower distortion than ``g_bar``."""
    return grid_distortion(g_hat, kind) < grid_distortion(g_bar, kind)


def is_acceptable(value: float, interval=DEFAULT_ACCEPTABILITY) -> bool:
    lo, hi = interval
    return lo <= value <= hi


__all__ = [
    "Quad",
    "QuadMeasureKind",
    "TriangleMeasureKind",
    "HARMONIC_SIGMA",
    "tri_measure",
    "robinson_aspect_ratio",
    "minrect_aspect_ratio",
    "lo_quality",
    "vanrens_quality",
    "remacle_quality",
    "wu_quality",
    "minrect_quality",
    "minrect_min_triangle_quality",
    "rectangles2015_quality",
    "harmonic_mean_quality",
    "rect_identity_gap",
    "measure",
    "cell_quality",
    "cell_values",
    "grid_distortion",
    "better_than",
    "is_acceptable",
]
