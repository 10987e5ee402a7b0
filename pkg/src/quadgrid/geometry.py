"""Planar primitives: signed areas, angles, convex hulls, bilinear maps and
the minimum-area enclosing rectangle.

Points are plain ``(x, y)`` pairs of floats.  Scalar routines use ``math``
rather than numpy because they are called millions of times on 3-4 points,
where array overhead dominates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import DegenerateGeometryError, SelfIntersectionError

# |area| <= DEGENERATE_RTOL * (bbox diagonal)^2 counts as zero area.
DEGENERATE_RTOL = 1e-14


class Point(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite coordinate in point {p!r}")
    return Point(x, y)


def as_points(points: Iterable) -> list[Point]:
    return [as_point(p) for p in points]


def bbox_diagonal(points: Sequence) -> float:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def area_tolerance(points: Sequence) -> float:
    return DEGENERATE_RTOL * bbox_diagonal(points) ** 2


def cross(o, a, b) -> float:
    """z-component of (a - o) x (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def signed_area(p0, p1, p2) -> float:
    """Signed area of triangle (p0, p1, p2); positive when counterclockwise."""
    return 0.5 * cross(p0, p1, p2)


def dist(p, q) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


# -- triangles ---------------------------------------------------------------


@dataclass(frozen=True)
class Triangle:
    """Triangle with derived lengths and radii.  ``area`` is signed."""

    a: Point
    b: Point
    c: Point

    @classmethod
    def from_points(cls, pts) -> "Triangle":
        p = as_points(pts)
        if len(p) != 3:
            raise ValueError(f"triangle needs 3 points, got {len(p)}")
        return cls(*p)

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.a, self.b, self.c)

    @property
    def sides(self) -> tuple[float, float, float]:
        # side i is opposite vertex i
        return (dist(self.b, self.c), dist(self.c, self.a), dist(self.a, self.b))

    @property
    def area(self) -> float:
        return signed_area(self.a, self.b, self.c)

    @property
    def l_max(self) -> float:
        return max(self.sides)

    @property
    def inradius(self) -> float:
        s = 0.5 * sum(self.sides)
        return abs(self.area) / s if s > 0 else 0.0

    @property
    def circumradius(self) -> float:
        A = abs(self.area)
        if A == 0.0:
            return math.inf
        l1, l2, l3 = self.sides
        return l1 * l2 * l3 / (4.0 * A)

    def is_degenerate(self) -> bool:
        return abs(self.area) <= area_tolerance(self.vertices)


# -- quadrilaterals ----------------------------------------------------------


@dataclass(frozen=True)
class Quad:
    """Quadrilateral ABCD, vertices expected in counterclockwise order.

    Side lengths follow a=|AB|, b=|BC|, c=|CD|, d=|DA|.
    """

    vertices: tuple[Point, Point, Point, Point]

    @classmethod
    def from_points(cls, pts) -> "Quad":
        p = as_points(pts)
        if len(p) != 4:
            raise ValueError(f"quadrilateral needs 4 points, got {len(p)}")
        return cls(tuple(p))

    def relabel(self, start: int) -> "Quad":
        """Cyclic relabeling so that vertex ``start`` becomes A."""
        v = self.vertices
        return Quad(tuple(v[(start + k) % 4] for k in range(4)))

    @property
    def sides(self) -> tuple[float, float, float, float]:
        return side_lengths(self)

    @property
    def angles(self) -> tuple[float, float, float, float]:
        return inner_angles(self)

    @property
    def area(self) -> float:
        return quad_area(self)

    @property
    def corner_areas(self) -> tuple[float, float, float, float]:
        return corner_triangle_areas(self)

    @property
    def min_corner_area(self) -> float:
        return min(corner_triangle_areas(self))

    def is_convex(self) -> bool:
        return min(corner_triangle_areas(self)) > area_tolerance(self.vertices)


def as_quad(q) -> tuple[Point, Point, Point, Point]:
    """Vertex tuple of a Quad or any sequence of four points."""
    if isinstance(q, Quad):
        return q.vertices
    p = as_points(q)
    if len(p) != 4:
        raise ValueError(f"quadrilateral needs 4 points, got {len(p)}")
    return tuple(p)


def side_lengths(q) -> tuple[float, float, float, float]:
    A, B, C, D = as_quad(q)
    return (dist(A, B), dist(B, C), dist(C, D), dist(D, A))


def corner_triangle_areas(q) -> tuple[float, float, float, float]:
    """Signed areas of the corner triangles (D,A,B), (A,B,C), (B,C,D), (C,D,A).

    All four are positive iff the quad is strictly convex and counterclockwise.
    """
    A, B, C, D = as_quad(q)
    return (
        signed_area(D, A, B),
        signed_area(A, B, C),
        signed_area(B, C, D),
        signed_area(C, D, A),
    )


def _segments_cross(p1, p2, p3, p4) -> bool:
    # proper crossing only: endpoints strictly on opposite sides both ways
    d1 = cross(p3, p4, p1)
    d2 = cross(p3, p4, p2)
    d3 = cross(p1, p2, p3)
    d4 = cross(p1, p2, p4)
    return d1 * d2 < 0 and d3 * d4 < 0


def is_self_intersecting(q) -> bool:
    A, B, C, D = as_quad(q)
    return _segments_cross(A, B, C, D) or _segments_cross(B, C, D, A)


def quad_area(q) -> float:
    """Shoelace area, positive for counterclockwise quads.

    Raises SelfIntersectionError for bowties, whose shoelace sum is not an area.
    """
    A, B, C, D = as_quad(q)
    if is_self_intersecting((A, B, C, D)):
        raise SelfIntersectionError("quadrilateral is self-intersecting (bowtie)")
    return 0.5 * cross(A, C, D) + 0.5 * cross(A, B, C)


def inner_angles(q) -> tuple[float, float, float, float]:
    """Interior angle at A, B, C, D in radians, in (0, 2*pi).

    Assumes counterclockwise order; a reflex vertex reports an angle above pi.
    """
    v = as_quad(q)
    scale = bbox_diagonal(v)
    out = []
    for k in range(4):
        p, prev, nxt = v[k], v[k - 1], v[(k + 1) % 4]
        ux, uy = nxt[0] - p[0], nxt[1] - p[1]
        wx, wy = prev[0] - p[0], prev[1] - p[1]
        if math.hypot(ux, uy) <= 1e-14 * scale or math.hypot(wx, wy) <= 1e-14 * scale:
            raise DegenerateGeometryError(f"zero-length side at vertex {'ABCD'[k]}")
        theta = math.atan2(ux * wy - uy * wx, ux * wx + uy * wy)
        if theta < 0.0:
            theta += 2.0 * math.pi
        out.append(theta)
    return tuple(out)


# -- convex hull -------------------------------------------------------------


def convex_hull(points: Iterable) -> list[Point]:
    """Counterclockwise convex hull (Andrew's monotone chain).

    Collinear points are dropped using the scale-relative area tolerance.
    The first vertex is the lexicographically smallest point.
    """
    pts = sorted(set(as_points(points)))
    if len(pts) < 3:
        raise DegenerateGeometryError("convex hull needs at least 3 distinct points")
    tol = 2.0 * area_tolerance(pts)

    def half(seq):
        chain: list[Point] = []
        for p in seq:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0.0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    # drop vertices that are collinear within tolerance and lie between their
    # neighbours; a tolerant pop inside the chain could discard real extremes
    changed = True
    while changed and len(hull) >= 3:
        changed = False
        for k in range(len(hull)):
            a, v, b = hull[k - 1], hull[k], hull[(k + 1) % len(hull)]
            forward = (v[0] - a[0]) * (b[0] - v[0]) + (v[1] - a[1]) * (b[1] - v[1])
            if cross(a, v, b) <= tol and forward > 0.0:
                del hull[k]
                changed = True
                break
    if len(hull) < 3 or abs(polygon_area(hull)) <= area_tolerance(pts):
        raise DegenerateGeometryError("all points are collinear")
    return hull


def polygon_area(poly: Sequence) -> float:
    n = len(poly)
    s = 0.0
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


# -- minimum-area enclosing rectangle ---------------------------------------


@dataclass(frozen=True)
class OrientedRectangle:
    """Rectangle centred at ``center`` with side directions ``axis`` and its
    left normal; ``half_extents`` are measured along those two directions."""

    center: Point
    axis: Point
    half_extents: tuple[float, float]

    @property
    def area(self) -> float:
        return 4.0 * self.half_extents[0] * self.half_extents[1]

    @property
    def aspect(self) -> float:
        hu, hv = self.half_extents
        return max(hu, hv) / min(hu, hv)

    @property
    def normal(self) -> Point:
        return Point(-self.axis[1], self.axis[0])

    def corners(self) -> list[Point]:
        (cx, cy), (ux, uy), (vx, vy) = self.center, self.axis, self.normal
        hu, hv = self.half_extents
        return [
            Point(cx + su * hu * ux + sv * hv * vx, cy + su * hu * uy + sv * hv * vy)
            for su, sv in ((-1, -1), (1, -1), (1, 1), (-1, 1))
        ]

    def local(self, p) -> tuple[float, float]:
        dx, dy = p[0] - self.center[0], p[1] - self.center[1]
        u, v = self.axis, self.normal
        return (dx * u[0] + dy * u[1], dx * v[0] + dy * v[1])

    def contains(self, points: Iterable, rtol: float = 1e-9) -> bool:
        pts = list(points)
        slack = rtol * max(bbox_diagonal(pts), 2 * max(self.half_extents))
        hu, hv = self.half_extents
        for p in pts:
            s, t = self.local(p)
            if abs(s) > hu + slack or abs(t) > hv + slack:
                return False
        return True


# relative area difference below which two enclosing rectangles count as tied
TIE_RTOL = 1e-10


def min_area_rect(polygon: Sequence) -> OrientedRectangle:
    """Minimum-area rectangle enclosing a counterclockwise convex polygon.

    Rotating calipers: for each edge direction the three remaining support
    points (far along the edge, farthest from it, far against it) only move
    forward, so the sweep is linear after the hull.

    The minimum is not always unique: for a quad, the rectangles flush with
    two adjacent edges can both have twice the area of the same triangle.
    Candidates within ``TIE_RTOL`` of the best area are resolved by the
    smaller aspect ratio, so the answer does not depend on vertex labels or
    on the orientation of the input.
    """
    poly = as_points(polygon)
    n = len(poly)
    if n < 3 or polygon_area(poly) <= area_tolerance(poly):
        raise DegenerateGeometryError("min_area_rect needs a convex polygon with positive area")

    def unit_edge(i):
        p, q = poly[i], poly[(i + 1) % n]
        ex, ey = q[0] - p[0], q[1] - p[1]
        L = math.hypot(ex, ey)
        return ex / L, ey / L

    def proj(k, d):
        return poly[k % n][0] * d[0] + poly[k % n][1] * d[1]

    ux, uy = unit_edge(0)
    u, v = (ux, uy), (-uy, ux)
    j = max(range(n), key=lambda k: proj(k, u))  # max along edge
    k = max(range(n), key=lambda k: proj(k, v))  # max height
    m = min(range(n), key=lambda k: proj(k, u))  # min along edge

    candidates = []
    for i in range(n):
        p = poly[i]
        if p == poly[(i + 1) % n]:
            continue
        ux, uy = unit_edge(i)
        u, v = (ux, uy), (-uy, ux)
        for _ in range(n):
            if proj(j + 1, u) > proj(j, u):
                j = (j + 1) % n
            else:
                break
        for _ in range(n):
            if proj(k + 1, v) > proj(k, v):
                k = (k + 1) % n
            else:
                break
        for _ in range(n):
            if proj(m + 1, u) < proj(m, u):
                m = (m + 1) % n
            else:
                break
        s_hi, s_lo = proj(j, u), proj(m, u)
        t_lo, t_hi = proj(i, v), proj(k, v)
        candidates.append(((s_hi - s_lo) * (t_hi - t_lo), u, v, s_lo, s_hi, t_lo, t_hi))

    least = min(c[0] for c in candidates)

    def aspect(c):
        w, h = c[4] - c[3], c[6] - c[5]
        return max(w, h) / min(w, h)

    tied = [c for c in candidates if c[0] <= least * (1.0 + TIE_RTOL)]
    _, u, v, s_lo, s_hi, t_lo, t_hi = min(tied, key=aspect)
    sc, tc = 0.5 * (s_lo + s_hi), 0.5 * (t_lo + t_hi)
    center = Point(sc * u[0] + tc * v[0], sc * u[1] + tc * v[1])
    return OrientedRectangle(center, Point(*u), (0.5 * (s_hi - s_lo), 0.5 * (t_hi - t_lo)))


# -- bilinear map ------------------------------------------------------------


@dataclass(frozen=True)
class BilinearCoeffs:
    """x = e1 + e2*xi + e3*eta + e4*xi*eta (and y with f), (xi, eta) in [-1, 1]^2.

    Corners: A <-> (-1,-1), B <-> (1,-1), C <-> (1,1), D <-> (-1,1).
    """

    e1: float
    e2: float
    e3: float
    e4: float
    f1: float
    f2: float
    f3: float
    f4: float

    def __call__(self, xi: float, eta: float) -> Point:
        return Point(
            self.e1 + self.e2 * xi + self.e3 * eta + self.e4 * xi * eta,
            self.f1 + self.f2 * xi + self.f3 * eta + self.f4 * xi * eta,
        )


REFERENCE_CORNERS = ((-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0))


def bilinear_coeffs(q) -> BilinearCoeffs:
    (xa, ya), (xb, yb), (xc, yc), (xd, yd) = as_quad(q)

    def coeffs(a, b, c, d):
        return (
            (a + b + c + d) / 4.0,
            (-a + b + c - d) / 4.0,
            (-a - b + c + d) / 4.0,
            (a - b + c - d) / 4.0,
        )

    return BilinearCoeffs(*coeffs(xa, xb, xc, xd), *coeffs(ya, yb, yc, yd))
