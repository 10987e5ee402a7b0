import math

import numpy as np
from hypothesis import assume, strategies as st

from quadgrid.geometry import corner_triangle_areas, quad_area

WORKED_QUAD = ((3.53, 10.21), (-10.0, -4.0), (11.81, -1.38), (9.27, 11.94))


def rotate(points, theta, scale=1.0, shift=(0.0, 0.0)):
    c, s = math.cos(theta), math.sin(theta)
    return tuple(
        (scale * (c * x - s * y) + shift[0], scale * (s * x + c * y) + shift[1]) for x, y in points
    )


def random_convex_quad(rng: np.random.Generator, margin: float = 0.05):
    """Convex quad with every corner triangle at least ``margin`` of the area."""
    while True:
        angles = np.sort(rng.uniform(0.0, 2 * math.pi, 4))
        radii = rng.uniform(0.3, 1.0, 4)
        q = tuple((float(r * math.cos(a)), float(r * math.sin(a))) for r, a in zip(radii, angles))
        areas = corner_triangle_areas(q)
        # all corner areas positive means convex, so quad_area is safe
        if min(areas) > 0 and min(areas) > margin * quad_area(q):
            return q


def random_rectangle(rng: np.random.Generator):
    w, h = rng.uniform(0.1, 10.0, 2)
    base = ((0.0, 0.0), (w, 0.0), (w, h), (0.0, h))
    return rotate(base, rng.uniform(0, 2 * math.pi), 1.0, tuple(rng.uniform(-50, 50, 2)))


def random_simple_quad(rng: np.random.Generator):
    """Counterclockwise simple quad, possibly nonconvex (star-shaped about the origin)."""
    while True:
        angles = np.sort(rng.uniform(0.0, 2 * math.pi, 4))
        radii = rng.uniform(0.05, 1.0, 4)
        q = tuple((float(r * math.cos(a)), float(r * math.sin(a))) for r, a in zip(radii, angles))
        gaps = np.diff(np.append(angles, angles[0] + 2 * math.pi))
        if gaps.max() < math.pi - 0.05 and gaps.min() > 0.05:
            return q


coords = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False)


@st.composite
def convex_quads(draw, margin: float = 0.05):
    angles = sorted(draw(st.lists(st.floats(0, 2 * math.pi), min_size=4, max_size=4)))
    radii = draw(st.lists(st.floats(0.3, 1.0), min_size=4, max_size=4))
    scale = draw(st.floats(0.01, 100.0))
    q = tuple((scale * r * math.cos(a), scale * r * math.sin(a)) for r, a in zip(radii, angles))
    areas = corner_triangle_areas(q)
    assume(min(areas) > 0 and min(areas) > margin * quad_area(q))
    return q


@st.composite
def rigid_scale(draw):
    theta = draw(st.floats(0, 2 * math.pi))
    scale = draw(st.floats(0.05, 20.0))
    shift = (draw(st.floats(-100, 100)), draw(st.floats(-100, 100)))
    return theta, scale, shift


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("] ", 1)[1].split(".")[0])):
            terminalreporter.write_line(line)
