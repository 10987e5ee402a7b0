"""Structured grids: data model, transfinite interpolation, convexity checks, file I/O.

Node p(i, j) lives at ``nodes[j, i]`` with i = 0..m-1 (columns) and
j = 0..n-1 (rows).  Cell (i, j) has corners p(i,j), p(i+1,j), p(i+1,j+1),
p(i,j+1), counterclockwise on unfolded grids.  Cells are iterated row-major
(j outer, i inner); per-cell corner triangles follow
:func:`quadgrid.geometry.corner_triangle_areas`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import ContourError, ParseError
from .geometry import Point, Quad, as_points, cross

SIDE_NAMES = ("bottom", "right", "top", "left")


# -- contour ---------------------------------------------------------------


def _proper_cross(p1, p2, p3, p4) -> bool:
    d1, d2 = cross(p3, p4, p1), cross(p3, p4, p2)
    d3, d4 = cross(p1, p2, p3), cross(p1, p2, p4)
    return d1 * d2 < 0 and d3 * d4 < 0


def _on_segment(p, a, b, tol) -> bool:
    if abs(cross(a, b, p)) > tol:
        return False
    return (min(a[0], b[0]) - 1e-12 <= p[0] <= max(a[0], b[0]) + 1e-12
            and min(a[1], b[1]) - 1e-12 <= p[1] <= max(a[1], b[1]) + 1e-12)


def polygon_is_simple(poly: Sequence) -> bool:
    n = len(poly)
    segs = [(poly[k], poly[(k + 1) % n]) for k in range(n)]
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    tol = 1e-12 * (max(xs) - min(xs) + max(ys) - min(ys)) ** 2
    for a in range(n):
        for b in range(a + 1, n):
            if b == a + 1 or (a == 0 and b == n - 1):
                continue
            (p1, p2), (p3, p4) = segs[a], segs[b]
            if _proper_cross(p1, p2, p3, p4):
                return False
            if any(_on_segment(p, *segs[b], tol) for p in (p1, p2)) or any(
                _on_segment(p, *segs[a], tol) for p in (p3, p4)
            ):
                return False
    return True


@dataclass(frozen=True)
class Contour:
    """Four boundary polylines traversed counterclockwise: bottom, right, top, left.

    Side k ends exactly where side k+1 starts (cyclically).
    """

    sides: tuple[tuple[Point, ...], ...]

    def __post_init__(self):
        if len(self.sides) != 4:
            raise ContourError(f"contour needs 4 sides, got {len(self.sides)}")
        for k, side in enumerate(self.sides):
            if len(side) < 2:
                raise ContourError(f"{SIDE_NAMES[k]} side needs at least 2 points")
        for k in range(4):
            nxt = (k + 1) % 4
            if tuple(self.sides[k][-1]) != tuple(self.sides[nxt][0]):
                raise ContourError(
                    f"contour not closed: {SIDE_NAMES[k]} and {SIDE_NAMES[nxt]} sides "
                    f"(sides {k + 1} and {nxt + 1}) do not share a corner"
                )
        if not polygon_is_simple(self.polygon()):
            raise ContourError("contour is self-intersecting")

    @classmethod
    def from_sides(cls, sides) -> "Contour":
        return cls(tuple(tuple(as_points(s)) for s in sides))

    def polygon(self) -> list[Point]:
        out: list[Point] = []
        for side in self.sides:
            out.extend(side[:-1])
        return out

    def signed_area(self) -> float:
        poly = self.polygon()
        n = len(poly)
        return 0.5 * sum(
            poly[k][0] * poly[(k + 1) % n][1] - poly[(k + 1) % n][0] * poly[k][1]
            for k in range(n)
        )


def rectangle_contour(width: float = 1.0, height: float = 1.0, origin=(0.0, 0.0)) -> Contour:
    x0, y0 = origin
    c = [(x0, y0), (x0 + width, y0), (x0 + width, y0 + height), (x0, y0 + height)]
    return Contour.from_sides([[c[0], c[1]], [c[1], c[2]], [c[2], c[3]], [c[3], c[0]]])


def horseshoe_contour(
    r_inner: float = 1.0,
    r_outer: float = 2.0,
    start_deg: float = -60.0,
    stop_deg: float = 240.0,
    arc_points: int = 61,
) -> Contour:
    """Annular sector: bottom/top are the radial end caps, right the outer arc,
    left the inner arc.

    Inner and outer arcs are resampled at matching angles, so TFI gives an
    unfolded but strongly graded grid; see :func:`notched_contour` for a fold.
    """
    t = np.radians(np.linspace(start_deg, stop_deg, arc_points))
    outer = [(r_outer * np.cos(a), r_outer * np.sin(a)) for a in t]
    inner = [(r_inner * np.cos(a), r_inner * np.sin(a)) for a in t[::-1]]
    bottom = [inner[-1], outer[0]]
    top = [outer[-1], inner[0]]
    return Contour.from_sides([bottom, outer, top, inner])


def notched_contour(width: float = 3.0, height: float = 2.0, depth: float = 0.4) -> Contour:
    """Rectangle whose top side dips into a tooth leaning against the traversal
    direction.  Plain TFI folds next to the tooth."""
    w, h = width, height
    top = [(w, h), (0.567 * w, h), (0.633 * w, depth * h), (0.433 * w, h), (0.0, h)]
    return Contour.from_sides([[(0.0, 0.0), (w, 0.0)], [(w, 0.0), (w, h)], top, [(0.0, h), (0.0, 0.0)]])


# -- grid --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StructuredGrid:
    """m x n node lattice; boundary nodes are fixed, interior nodes movable."""

    nodes: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.nodes, dtype=float)
        if a.ndim != 3 or a.shape[2] != 2:
            raise ValueError(f"nodes must have shape (n, m, 2), got {a.shape}")
        if a.shape[0] < 2 or a.shape[1] < 2:
            raise ValueError(f"grid needs m, n >= 2, got m={a.shape[1]}, n={a.shape[0]}")
        if not np.all(np.isfinite(a)):
            raise ValueError("grid has non-finite coordinates")
        a.setflags(write=False)
        object.__setattr__(self, "nodes", a)

    @property
    def m(self) -> int:
        return self.nodes.shape[1]

    @property
    def n(self) -> int:
        return self.nodes.shape[0]

    @property
    def num_cells(self) -> int:
        return (self.m - 1) * (self.n - 1)

    @property
    def num_interior(self) -> int:
        return max(self.m - 2, 0) * max(self.n - 2, 0)

    def __repr__(self):
        return f"StructuredGrid(m={self.m}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, StructuredGrid) and np.array_equal(self.nodes, other.nodes)

    def node(self, i: int, j: int) -> Point:
        x, y = self.nodes[j, i]
        return Point(float(x), float(y))

    def cell(self, i: int, j: int) -> Quad:
        P = self.nodes
        return Quad(
            tuple(
                Point(float(x), float(y))
                for x, y in (P[j, i], P[j, i + 1], P[j + 1, i + 1], P[j + 1, i])
            )
        )

    def cells(self) -> Iterator[tuple[tuple[int, int], Quad]]:
        for j in range(self.n - 1):
            for i in range(self.m - 1):
                yield (i, j), self.cell(i, j)

    def cell_index(self, flat: int) -> tuple[int, int]:
        return (flat % (self.m - 1), flat // (self.m - 1))

    def cell_corners(self) -> np.ndarray:
        """Array (n-1, m-1, 4, 2) of cell corners A, B, C, D."""
        P = self.nodes
        return np.stack([P[:-1, :-1], P[:-1, 1:], P[1:, 1:], P[1:, :-1]], axis=2)

    def interior(self) -> np.ndarray:
        """Interior coordinates as a flat vector, row-major, x then y per node."""
        return self.nodes[1:-1, 1:-1].reshape(-1).copy()

    def with_interior(self, x: np.ndarray) -> "StructuredGrid":
        nodes = self.nodes.copy()
        nodes[1:-1, 1:-1] = np.asarray(x, dtype=float).reshape(self.n - 2, self.m - 2, 2)
        return StructuredGrid(nodes)

    def bounds(self) -> tuple[float, float, float, float]:
        xs, ys = self.nodes[..., 0], self.nodes[..., 1]
        return float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max())

    def signed_area(self) -> float:
        return float(cell_areas(self).sum())


def uniform_grid(m: int, n: int, width: float = 1.0, height: float = 1.0, origin=(0.0, 0.0)):
    x = origin[0] + np.linspace(0.0, width, m)
    y = origin[1] + np.linspace(0.0, height, n)
    X, Y = np.meshgrid(x, y)
    return StructuredGrid(np.stack([X, Y], axis=-1))


def normalize_orientation(g: StructuredGrid) -> StructuredGrid:
    """Flip row order if the grid is clockwise overall."""
    if g.signed_area() < 0:
        return StructuredGrid(g.nodes[::-1].copy())
    return g


def perturb_interior(g: StructuredGrid, fraction: float, seed: int | None = 0) -> StructuredGrid:
    """Displace interior nodes by uniform noise of up to ``fraction`` of the
    local spacing in each coordinate."""
    rng = np.random.default_rng(seed)
    P = g.nodes
    hx = np.linalg.norm(P[1:-1, 2:] - P[1:-1, :-2], axis=-1) / 2
    hy = np.linalg.norm(P[2:, 1:-1] - P[:-2, 1:-1], axis=-1) / 2
    h = np.minimum(hx, hy)[..., None]
    noise = rng.uniform(-fraction, fraction, size=P[1:-1, 1:-1].shape) * h
    nodes = P.copy()
    nodes[1:-1, 1:-1] += noise
    return StructuredGrid(nodes)


# -- transfinite interpolation ---------------------------------------------


def resample_polyline(points: Sequence, count: int) -> np.ndarray:
    """``count`` points evenly spaced in arc length, endpoints kept exactly."""
    p = np.asarray(points, dtype=float)
    seg = np.linalg.norm(np.diff(p, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if s[-1] <= 0.0:
        raise ContourError("contour side has zero length")
    t = np.linspace(0.0, s[-1], count)
    out = np.stack([np.interp(t, s, p[:, 0]), np.interp(t, s, p[:, 1])], axis=1)
    out[0], out[-1] = p[0], p[-1]
    return out


def tfi_generate(c: Contour, m: int, n: int) -> StructuredGrid:
    """Bilinearly blended transfinite interpolation of the four sides.

    The grid may come out folded on strongly curved regions; check it with
    :func:`is_eps_convex`.
    """
    if m < 2 or n < 2:
        raise ValueError(f"grid needs m, n >= 2, got m={m}, n={n}")
    bottom = resample_polyline(c.sides[0], m)
    right = resample_polyline(c.sides[1], n)
    top = resample_polyline(c.sides[2], m)[::-1]
    left = resample_polyline(c.sides[3], n)[::-1]

    xi = np.linspace(0.0, 1.0, m)[None, :, None]
    eta = np.linspace(0.0, 1.0, n)[:, None, None]
    p00, p10, p11, p01 = bottom[0], bottom[-1], top[-1], top[0]
    nodes = (
        (1 - eta) * bottom[None, :, :]
        + eta * top[None, :, :]
        + (1 - xi) * left[:, None, :]
        + xi * right[:, None, :]
        - (1 - xi) * (1 - eta) * p00
        - xi * (1 - eta) * p10
        - xi * eta * p11
        - (1 - xi) * eta * p01
    )
    nodes[0, :], nodes[-1, :] = bottom, top
    nodes[:, 0], nodes[:, -1] = left, right
    return normalize_orientation(StructuredGrid(nodes))


# -- areas and convexity ----------------------------------------------------


def _tri_area(a, b, c):
    return 0.5 * ((b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1])
                  - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0]))


def corner_areas(g: StructuredGrid) -> np.ndarray:
    """Signed corner-triangle areas, shape (n-1, m-1, 4)."""
    Q = g.cell_corners()
    A, B, C, D = Q[..., 0, :], Q[..., 1, :], Q[..., 2, :], Q[..., 3, :]
    return np.stack([_tri_area(D, A, B), _tri_area(A, B, C),
                     _tri_area(B, C, D), _tri_area(C, D, A)], axis=-1)


def triangle_areas(g: StructuredGrid) -> np.ndarray:
    """All 4*Ne signed triangle areas, cell-major then corner order."""
    return corner_areas(g).reshape(-1)


def cell_areas(g: StructuredGrid) -> np.ndarray:
    """Signed cell areas, shape (n-1, m-1)."""
    a = corner_areas(g)
    return a[..., 0] + a[..., 2]


@dataclass(frozen=True)
class ConvexityReport:
    min_triangle_area: float
    offending_cells: list[tuple[int, int]]
    eps_used: float
    threshold: float

    @property
    def ok(self) -> bool:
        return not self.offending_cells

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        status = "convex" if self.ok else f"{len(self.offending_cells)} cells violate"
        return (f"eps-convexity (eps={self.eps_used:g}): {status}; "
                f"min triangle area {self.min_triangle_area:.6g}, threshold {self.threshold:.6g}")


def is_eps_convex(g: StructuredGrid, eps: float = 0.0) -> ConvexityReport:
    """Every triangle area must exceed eps times the mean positive triangle area."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    a = corner_areas(g)
    pos = a[a > 0]
    mean_pos = float(pos.mean()) if pos.size else 0.0
    threshold = eps * mean_pos
    bad = np.any(a <= threshold, axis=-1) if pos.size else np.ones(a.shape[:2], bool)
    js, is_ = np.nonzero(bad)
    return ConvexityReport(
        min_triangle_area=float(a.min()),
        offending_cells=[(int(i), int(j)) for j, i in zip(js, is_)],
        eps_used=float(eps),
        threshold=threshold,
    )


# -- file formats -----------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_xy(line: str, lineno: int, path) -> tuple[float, float]:
    parts = line.split()
    if len(parts) != 2:
        raise ParseError(f"expected 'x y', got {line!r}", path, lineno)
    try:
        x, y = float(parts[0]), float(parts[1])
    except ValueError:
        raise ParseError(f"non-numeric coordinate in {line!r}", path, lineno) from None
    if not (np.isfinite(x) and np.isfinite(y)):
        raise ParseError(f"non-finite coordinate in {line!r}", path, lineno)
    return x, y


def _parse_count(line, keyword, lineno, path) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != keyword:
        raise ParseError(f"expected '{keyword} <count>', got {line!r}", path, lineno)
    try:
        return int(parts[1])
    except ValueError:
        raise ParseError(f"non-integer count in {line!r}", path, lineno) from None


def parse_contour(text: str, path=None) -> Contour:
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError("empty contour file", path)
    it = iter(lines)
    lineno, header = next(it)
    if _parse_count(header, "contour", lineno, path) != 4:
        raise ParseError("contour must have 4 sides", path, lineno)
    sides = []
    last = lineno
    for k in range(4):
        try:
            lineno, line = next(it)
        except StopIteration:
            raise ParseError(f"missing side {k + 1}", path, last) from None
        count = _parse_count(line, "side", lineno, path)
        pts = []
        for _ in range(count):
            try:
                lineno, line = next(it)
            except StopIteration:
                raise ParseError(f"side {k + 1}: expected {count} points, got {len(pts)}",
                                 path, lineno) from None
            pts.append(_parse_xy(line, lineno, path))
        sides.append(pts)
        last = lineno
    extra = next(it, None)
    if extra is not None:
        raise ParseError(f"unexpected trailing data {extra[1]!r}", path, extra[0])
    return Contour.from_sides(sides)


def read_contour(path) -> Contour:
    return parse_contour(Path(path).read_text(), path)


def format_contour(c: Contour) -> str:
    out = ["contour 4"]
    for side in c.sides:
        out.append(f"side {len(side)}")
        out.extend(f"{_fmt(x)} {_fmt(y)}" for x, y in side)
    return "\n".join(out) + "\n"


def write_contour(c: Contour, path) -> None:
    Path(path).write_text(format_contour(c))


def parse_grid(text: str, path=None) -> StructuredGrid:
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError("empty grid file", path)
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "grid":
        raise ParseError(f"expected 'grid <m> <n>', got {header!r}", path, lineno)
    try:
        m, n = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError(f"non-integer dimensions in {header!r}", path, lineno) from None
    if m < 2 or n < 2:
        raise ParseError(f"grid needs m, n >= 2, got {m} x {n}", path, lineno)
    body = lines[1:]
    if len(body) != m * n:
        where = body[-1][0] if body else lineno
        raise ParseError(f"expected m*n = {m * n} nodes, got {len(body)}", path, where)
    xy = np.array([_parse_xy(line, ln, path) for ln, line in body])
    return normalize_orientation(StructuredGrid(xy.reshape(n, m, 2)))


def read_grid(path) -> StructuredGrid:
    return parse_grid(Path(path).read_text(), path)


def format_grid(g: StructuredGrid) -> str:
    out = [f"grid {g.m} {g.n}"]
    out.extend(f"{_fmt(x)} {_fmt(y)}" for x, y in g.nodes.reshape(-1, 2))
    return "\n".join(out) + "\n"


def write_grid(g: StructuredGrid, path) -> None:
    Path(path).write_text(format_grid(g))
