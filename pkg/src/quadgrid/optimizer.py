"""Interior-node optimization that never leaves the set of eps-convex grids.

L-BFGS directions with a halving Armijo line search; a trial step is taken
only if the trial grid passes :func:`is_eps_convex` and strictly lowers the
functional.  Boundary nodes never move.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import BarrierViolation, ConfigError, QuadGridError
from .functionals import Evaluation, FunctionalConfig, _evaluation, _scatter, \
    _triangle_weights_to_corners, combined
from .grid import StructuredGrid, corner_areas, is_eps_convex

log = logging.getLogger(__name__)

ARMIJO_C1 = 1e-4


class InfeasibleGridError(BarrierViolation):
    """Starting grid is folded or not eps-convex."""


class LineSearchFailure(QuadGridError):
    """No acceptable step above ``step_tol``."""


class Termination(enum.Enum):
    GRAD_TOL = "GradTol"
    STEP_TOL = "StepTol"
    MAX_ITERS = "MaxIters"


@dataclass(frozen=True)
class SmoothOptions:
    max_iters: int = 500
    grad_tol: float = 1e-6
    step_tol: float = 1e-10
    eps: float = 1e-3
    memory: int = 7
    trace: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if not (self.grad_tol > 0 and self.step_tol > 0):
            raise ConfigError("tolerances must be positive")
        if self.eps < 0:
            raise ConfigError("eps must be nonnegative")
        if self.memory < 1:
            raise ConfigError("memory must be >= 1")


class TraceEntry(NamedTuple):
    iter: int
    value: float
    grad_norm: float
    step: float


@dataclass
class SmoothResult:
    grid: StructuredGrid
    iterations: int
    initial_value: float
    final_value: float
    final_grad_norm: float
    termination: Termination
    trace: list[TraceEntry] = field(default_factory=list)


def typical_spacing(g: StructuredGrid) -> float:
    return math.sqrt(abs(float(corner_areas(g).mean())) * 2.0)


# -- generic minimizer ------------------------------------------------------


def _two_loop(grad, pairs):
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * s.dot(q)
        alphas.append(a)
        q -= a * y
    if pairs:
        s, y, _ = pairs[-1]
        q *= s.dot(y) / y.dot(y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * y.dot(q)
        q += (a - b) * s
    return -q


def _backtrack(fun, feasible, x, f, grad, d, t0, step_tol):
    """Largest t in t0 * 2^-k passing feasibility, strict decrease and Armijo."""
    slope = grad.dot(d)
    if not slope < 0:
        raise ValueError("direction is not a descent direction")
    t = t0
    while t >= step_tol:
        xt = x + t * d
        if feasible(xt):
            try:
                ft, gt = fun(xt)
            except BarrierViolation:
                ft = math.inf
            if ft < f and ft <= f + ARMIJO_C1 * t * slope:
                return t, xt, ft, gt
        t *= 0.5
    raise LineSearchFailure(f"no acceptable step down to t={step_tol:g}")


def _minimize(fun, x0, feasible, opts: SmoothOptions, max_move: float,
              stop=None, callback=None):
    x = x0.copy()
    f, grad = fun(x)
    g0 = float(np.linalg.norm(grad))
    trace = [TraceEntry(0, f, g0, 0.0)]
    # floor for grids that start at an optimum, where g0 is pure round-off
    floor = 1e-12 * (abs(f) + 1.0) / max(max_move, 1e-300)
    pairs: list = []
    status = Termination.MAX_ITERS
    it = 0
    gnorm = g0
    while True:
        if gnorm <= max(opts.grad_tol * g0, floor) or (it > 0 and gnorm == 0.0):
            status = Termination.GRAD_TOL
            break
        if stop is not None and stop(x):
            status = Termination.GRAD_TOL
            break
        if it >= opts.max_iters:
            status = Termination.MAX_ITERS
            break
        try:
            t, x_new, f_new, g_new = _step(fun, feasible, x, f, grad, pairs, opts, max_move)
        except LineSearchFailure:
            status = Termination.STEP_TOL
            break
        s, y = x_new - x, g_new - grad
        sy = s.dot(y)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            pairs.append((s, y, 1.0 / sy))
            if len(pairs) > opts.memory:
                pairs.pop(0)
        x, f, grad = x_new, f_new, g_new
        it += 1
        gnorm = float(np.linalg.norm(grad))
        trace.append(TraceEntry(it, f, gnorm, t))
        if opts.trace:
            log.info("iter %4d  F=%.12g  |g|=%.3e  t=%.3g", it, f, gnorm, t)
        if callback is not None:
            callback(it, x, f)
    return x, f, grad, it, status, trace


def _step(fun, feasible, x, f, grad, pairs, opts, max_move):
    d = _two_loop(grad, pairs) if pairs else -grad
    if not pairs or grad.dot(d) >= 0:
        pairs.clear()
        d = -grad
    # cap the largest single-node displacement at max_move
    big = np.max(np.abs(d))
    if big > max_move or not pairs:
        d = d * (max_move / big)
    try:
        return _backtrack(fun, feasible, x, f, grad, d, 1.0, opts.step_tol)
    except LineSearchFailure:
        if not pairs:
            raise
    pairs.clear()
    d = -grad * (max_move / np.max(np.abs(grad)))
    return _backtrack(fun, feasible, x, f, grad, d, 1.0, opts.step_tol)


# -- grid-level API ---------------------------------------------------------


def _grid_problem(g: StructuredGrid, cfg: FunctionalConfig, eps: float):
    def fun(x):
        e = combined(g.with_interior(x), cfg)
        return e.value, np.array(e.gradient)

    def feasible(x):
        return is_eps_convex(g.with_interior(x), eps).ok

    return fun, feasible


def line_search(
    g: StructuredGrid,
    direction: np.ndarray,
    cfg: FunctionalConfig,
    eps: float,
    t0: float = 1.0,
    step_tol: float = 1e-10,
) -> float:
    """Accepted step length along ``direction`` (interior coordinate vector).

    Halves from ``t0`` until the trial grid is eps-convex and satisfies the
    Armijo condition; raises LineSearchFailure below ``step_tol`` and
    ValueError if ``direction`` is not a descent direction.
    """
    fun, feasible = _grid_problem(g, cfg, eps)
    x = g.interior()
    f, grad = fun(x)
    t, *_ = _backtrack(fun, feasible, x, f, grad, np.asarray(direction, float), t0, step_tol)
    return t


def smooth(
    g0: StructuredGrid,
    cfg: FunctionalConfig,
    opts: SmoothOptions = SmoothOptions(),
    callback: Callable[[int, StructuredGrid, float], None] | None = None,
) -> SmoothResult:
    """Minimize ``combined(g, cfg)`` over interior nodes from an eps-convex start.

    ``callback(iteration, grid, value)`` sees every accepted iterate.
    """
    report = is_eps_convex(g0, opts.eps)
    if not report.ok:
        raise InfeasibleGridError(
            f"initial grid is not eps-convex (eps={opts.eps:g}); untangle it first "
            "with untangle() or the CLI flag --barrier-first",
            report.offending_cells,
        )
    if g0.num_interior == 0:
        e = combined(g0, cfg)
        return SmoothResult(g0, 0, e.value, e.value, 0.0, Termination.GRAD_TOL,
                            [TraceEntry(0, e.value, 0.0, 0.0)])
    fun, feasible = _grid_problem(g0, cfg, opts.eps)
    cb = None
    if callback is not None:
        def cb(it, x, f):
            callback(it, g0.with_interior(x), f)

    x, f, grad, it, status, trace = _minimize(
        fun, g0.interior(), feasible, opts, typical_spacing(g0), callback=cb
    )
    return SmoothResult(
        grid=g0.with_interior(x),
        iterations=it,
        initial_value=trace[0].value,
        final_value=f,
        final_grad_norm=float(np.linalg.norm(grad)),
        termination=status,
        trace=trace,
    )


# -- untangling ---------------------------------------------------------------


def _regularized_barrier(g: StructuredGrid, eps: float, tau: float) -> Evaluation:
    """(1/N) sum abar / h(alpha_q - eps*abar), h(z) = (z + sqrt(z^2 + 4 tau^2)) / 2.

    h is positive for every z, so the functional is defined on folded grids and
    tends to the reciprocal barrier as tau -> 0.
    """
    a = corner_areas(g)
    N = a.size
    abar = a.mean()
    z = a - eps * abar
    root = np.sqrt(z * z + 4.0 * tau * tau)
    h = 0.5 * (z + root)
    value = (abar / h).sum() / N
    dh = 0.5 * (1.0 + z / root)
    # abar is fixed under interior moves, so its chain-rule term is dropped
    W = -abar * dh / (h * h) / N
    return _evaluation(g, value, _scatter(g, _triangle_weights_to_corners(g.cell_corners(), W)))


def untangle(
    g0: StructuredGrid,
    eps: float = 1e-3,
    max_rounds: int = 50,
    iters_per_round: int = 200,
) -> StructuredGrid:
    """Move interior nodes until the grid is eps-convex.

    Minimizes a regularized reciprocal barrier that is finite on folded grids,
    shrinking the regularization each round.  Raises InfeasibleGridError if no
    eps-convex grid is reached.
    """
    g = g0
    if is_eps_convex(g, eps).ok:
        return g
    if g.num_interior == 0:
        raise InfeasibleGridError("grid has no interior nodes to move",
                                  is_eps_convex(g, eps).offending_cells)
    abar = float(corner_areas(g).mean())
    if abar <= 0:
        raise InfeasibleGridError("boundary encloses no positive area")
    h = typical_spacing(g)
    opts = SmoothOptions(max_iters=iters_per_round, grad_tol=1e-10, eps=eps)
    target = 2.0 * eps

    def ok(x):
        return is_eps_convex(g.with_interior(x), eps).ok

    for _ in range(max_rounds):
        zmin = float(corner_areas(g).min()) - target * abar
        tau = max(0.5 * abs(zmin), 1e-3 * abar) if zmin < 0 else 1e-3 * abar

        def fun(x, tau=tau):
            e = _regularized_barrier(g.with_interior(x), target, tau)
            return e.value, np.array(e.gradient)

        x, *_ = _minimize(fun, g.interior(), lambda x: True, opts, h, stop=ok)
        g = g.with_interior(x)
        if is_eps_convex(g, eps).ok:
            return g
    raise InfeasibleGridError("untangling did not reach an eps-convex grid",
                              is_eps_convex(g, eps).offending_cells)
