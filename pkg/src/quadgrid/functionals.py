"""Smooth grid functionals with analytic gradients.

Every grid-level functional returns an :class:`Evaluation` whose gradient is
taken with respect to the interior node coordinates only, ordered like
:meth:`StructuredGrid.interior` (row-major nodes, x then y).  Per-cell
partials are computed vectorized and scattered into nodes with fixed slice
order, so results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import BarrierViolation, ConfigError
from .geometry import as_quad, quad_area, side_lengths
from .grid import StructuredGrid, corner_areas

Shape = Literal["fr", "fR", "fa"]
Barrier = Literal["sw", "fa"]

# corner triangles (D,A,B), (A,B,C), (B,C,D), (C,D,A) as corner indices
_TRIANGLES = ((3, 0, 1), (0, 1, 2), (1, 2, 3), (2, 3, 0))


@dataclass(frozen=True)
class Evaluation:
    value: float
    gradient: np.ndarray

    def __post_init__(self):
        self.gradient.setflags(write=False)

    @property
    def grad_norm(self) -> float:
        return float(np.linalg.norm(self.gradient))


@dataclass(frozen=True)
class FunctionalConfig:
    """Weights for ``combined``: F = (1 - sigma) * barrier + sigma * shape.

    ``beta=None`` means 1/mean triangle area of the grid being evaluated,
    which stays constant while only interior nodes move.
    """

    sigma: float = 0.5
    alpha: float = 1.0
    beta: float | None = None
    delta: float = 1e-3
    eps: float = 0.0
    shape: Shape = "fr"
    barrier: Barrier = "sw"

    def __post_init__(self):
        if not (0.0 <= self.sigma <= 1.0):
            raise ConfigError(f"sigma must lie in [0, 1], got {self.sigma}")
        if self.alpha < 0 or (self.beta is not None and self.beta < 0):
            raise ConfigError("alpha and beta must be nonnegative")
        if self.shape == "fr" and self.alpha == 0 and self.beta == 0:
            raise ConfigError("alpha + beta must be positive for F_r")
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if self.eps < 0:
            raise ConfigError(f"eps must be nonnegative, got {self.eps}")
        if self.shape not in ("fr", "fR", "fa"):
            raise ConfigError(f"unknown shape functional {self.shape!r} (fr, fR, fa)")
        if self.barrier not in ("sw", "fa"):
            raise ConfigError(f"unknown barrier functional {self.barrier!r} (sw, fa)")


# -- per-cell functions -------------------------------------------------------


def f_ao(q) -> float:
    """Area-orthogonality product (a^2 + c^2)(b^2 + d^2)."""
    a, b, c, d = side_lengths(q)
    return (a * a + c * c) * (b * b + d * d)


def f_rect(q) -> float:
    """f_ao / (4 a_c^2): >= 1 on convex quads, 1 exactly on rectangles."""
    v = as_quad(q)
    area = quad_area(v)
    if area <= 0.0:
        raise BarrierViolation("f_rect needs positive cell area")
    return f_ao(v) / (4.0 * area * area)


# -- helpers -------------------------------------------------------------------


def _scatter(g: StructuredGrid, G: np.ndarray) -> np.ndarray:
    """Sum per-cell corner partials (n-1, m-1, 4, 2) into node slots."""
    out = np.zeros_like(g.nodes)
    out[:-1, :-1] += G[:, :, 0]
    out[:-1, 1:] += G[:, :, 1]
    out[1:, 1:] += G[:, :, 2]
    out[1:, :-1] += G[:, :, 3]
    return out


def _evaluation(g: StructuredGrid, value: float, node_grad: np.ndarray) -> Evaluation:
    return Evaluation(float(value), node_grad[1:-1, 1:-1].reshape(-1).copy())


def _perp(v):
    # (x, y) -> (-y, x)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def _triangle_weights_to_corners(Q: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Chain rule through the four corner-triangle areas.

    W has shape (n-1, m-1, 4): dPhi/d(alpha_t) for each corner triangle t.
    """
    G = np.zeros_like(Q)
    for t, (p, q, r) in enumerate(_TRIANGLES):
        w = W[..., t, None]
        P, R, S = Q[..., p, :], Q[..., q, :], Q[..., r, :]
        # d(area)/dP = 0.5 * (R_y - S_y, S_x - R_x) = 0.5 * perp(S - R), cyclically
        G[..., p, :] += 0.5 * w * _perp(S - R)
        G[..., q, :] += 0.5 * w * _perp(P - S)
        G[..., r, :] += 0.5 * w * _perp(R - P)
    return G


def _cells_where(g: StructuredGrid, mask: np.ndarray) -> list[tuple[int, int]]:
    js, is_ = np.nonzero(mask)
    return [(int(i), int(j)) for j, i in zip(js, is_)]


def mean_triangle_area(g: StructuredGrid) -> float:
    return float(corner_areas(g).mean())


# -- grid functionals ---------------------------------------------------------


def F_R(g: StructuredGrid) -> Evaluation:
    """Mean of f_rect over all cells."""
    Q = g.cell_corners()
    A, B, C, D = (Q[..., k, :] for k in range(4))
    ab, bc, cd, da = B - A, C - B, D - C, A - D
    s1 = (ab**2).sum(-1) + (cd**2).sum(-1)
    s2 = (bc**2).sum(-1) + (da**2).sum(-1)
    u, w = C - A, D - B
    area = 0.5 * (u[..., 0] * w[..., 1] - u[..., 1] * w[..., 0])
    bad = area <= 0.0
    if np.any(bad):
        raise BarrierViolation("F_R needs positive cell areas", _cells_where(g, bad))
    ne = area.size
    f = s1 * s2 / (4.0 * area**2)

    ds1 = np.stack([-2 * ab, 2 * ab, -2 * cd, 2 * cd], axis=2)
    ds2 = np.stack([2 * da, -2 * bc, 2 * bc, -2 * da], axis=2)
    # area = 0.5 * u x w with u = C - A, w = D - B
    du = np.stack([w[..., 1], -w[..., 0]], axis=-1)
    dw = np.stack([-u[..., 1], u[..., 0]], axis=-1)
    darea = 0.5 * np.stack([-du, -dw, du, dw], axis=2)

    c1 = (s2 / (4.0 * area**2))[..., None, None]
    c2 = (s1 / (4.0 * area**2))[..., None, None]
    c3 = (2.0 * f / area)[..., None, None]
    G = (c1 * ds1 + c2 * ds2 - c3 * darea) / ne
    return _evaluation(g, f.sum() / ne, _scatter(g, G))


def _parallelogram_residual(Q):
    return 0.5 * (Q[..., 0, :] + Q[..., 2, :] - Q[..., 1, :] - Q[..., 3, :])


def F_p(g: StructuredGrid) -> Evaluation:
    """Sum over cells of |midpoint(AC) - midpoint(BD)|^2."""
    Q = g.cell_corners()
    r = _parallelogram_residual(Q)
    G = np.stack([r, -r, r, -r], axis=2)
    return _evaluation(g, (r**2).sum(), _scatter(g, G))


def F_d(g: StructuredGrid) -> Evaluation:
    """Sum over cells of (|AC|^2 - |BD|^2)^2."""
    Q = g.cell_corners()
    ac = Q[..., 0, :] - Q[..., 2, :]
    bd = Q[..., 1, :] - Q[..., 3, :]
    diff = (ac**2).sum(-1) - (bd**2).sum(-1)
    k = (4.0 * diff)[..., None]
    G = np.stack([k * ac, -k * bd, -k * ac, k * bd], axis=2)
    return _evaluation(g, (diff**2).sum(), _scatter(g, G))


def F_r(g: StructuredGrid, alpha: float = 1.0, beta: float | None = None) -> Evaluation:
    """alpha * F_p + beta * F_d; zero exactly on grids of rectangles."""
    if beta is None:
        beta = 1.0 / mean_triangle_area(g)
    if alpha < 0 or beta < 0 or (alpha == 0 and beta == 0):
        raise ConfigError("F_r needs alpha, beta >= 0, not both zero")
    p, d = F_p(g), F_d(g)
    return Evaluation(alpha * p.value + beta * d.value, alpha * p.gradient + beta * d.gradient)


def F_A(g: StructuredGrid, delta: float = 1e-3) -> Evaluation:
    """Sum over all corner triangles of 1/alpha^2 + delta * alpha^2."""
    if not delta > 0:
        raise ConfigError("delta must be positive")
    a = corner_areas(g)
    bad = a == 0.0
    if np.any(bad):
        raise BarrierViolation("F_A undefined on zero-area triangles", _cells_where(g, bad.any(-1)))
    value = (1.0 / a**2).sum() + delta * (a**2).sum()
    W = -2.0 / a**3 + 2.0 * delta * a
    return _evaluation(g, value, _scatter(g, _triangle_weights_to_corners(g.cell_corners(), W)))


def S_w(g: StructuredGrid, eps: float = 0.0) -> Evaluation:
    """Scale-free reciprocal barrier (1/N) sum abar / (alpha_q - eps*abar).

    abar is the mean triangle area.  With fixed boundary nodes abar does not
    change, so the value is minimized by equal triangle areas and diverges as
    any triangle area drops to eps*abar.
    """
    if eps < 0:
        raise ConfigError("eps must be nonnegative")
    a = corner_areas(g)
    N = a.size
    abar = a.mean()
    gap = a - eps * abar
    bad = gap <= 0.0
    if abar <= 0.0 or np.any(bad):
        mask = bad.any(-1) if abar > 0.0 else np.ones(a.shape[:2], bool)
        raise BarrierViolation(f"S_w needs every triangle area above {eps:g} * mean",
                               _cells_where(g, mask))
    value = (abar / gap).sum() / N
    # d/d(alpha_q) directly, plus the shared term through abar (d abar/d alpha_q = 1/N)
    shared = (1.0 / gap + eps * abar / gap**2).sum() / N**2
    W = -abar / gap**2 / N + shared
    return _evaluation(g, value, _scatter(g, _triangle_weights_to_corners(g.cell_corners(), W)))


def shape_functional(g: StructuredGrid, cfg: FunctionalConfig) -> Evaluation:
    if cfg.shape == "fr":
        return F_r(g, cfg.alpha, cfg.beta)
    if cfg.shape == "fR":
        return F_R(g)
    return F_A(g, cfg.delta)


def barrier_functional(g: StructuredGrid, cfg: FunctionalConfig) -> Evaluation:
    if cfg.barrier == "sw":
        return S_w(g, cfg.eps)
    return F_A(g, cfg.delta)


def combined(g: StructuredGrid, cfg: FunctionalConfig) -> Evaluation:
    """(1 - sigma) * barrier + sigma * shape; a zero weight skips its term."""
    value = 0.0
    grad = np.zeros(2 * g.num_interior)
    if cfg.sigma < 1.0:
        b = barrier_functional(g, cfg)
        value += (1.0 - cfg.sigma) * b.value
        grad += (1.0 - cfg.sigma) * b.gradient
    if cfg.sigma > 0.0:
        s = shape_functional(g, cfg)
        value += cfg.sigma * s.value
        grad += cfg.sigma * s.gradient
    if not math.isfinite(value):
        raise BarrierViolation("functional is not finite")
    return Evaluation(value, grad)


FUNCTIONALS = {
    "F_R": lambda g, cfg: F_R(g),
    "F_p": lambda g, cfg: F_p(g),
    "F_d": lambda g, cfg: F_d(g),
    "F_r": lambda g, cfg: F_r(g, cfg.alpha, cfg.beta),
    "F_A": lambda g, cfg: F_A(g, cfg.delta),
    "S_w": lambda g, cfg: S_w(g, cfg.eps),
    "combined": combined,
}
