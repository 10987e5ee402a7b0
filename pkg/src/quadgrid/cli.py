"""Command-line interface: ``quadgrid {tfi,smooth,quality,colormap}``.

Exit codes: 0 success, 1 usage/config/parse/IO error, 2 infeasible grid,
3 quality gate failed.  Every command ends with one JSON line on stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import CellError, ConfigError, ContourError, ParseError, QuadGridError
from .functionals import FunctionalConfig
from .grid import is_eps_convex, perturb_interior, read_contour, read_grid, tfi_generate, write_grid
from .optimizer import SmoothOptions, smooth, untangle
from .quality import QuadMeasureKind, grid_distortion
from .report import colormap_svg, quality_stats

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_GATE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for infeasibility
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    """Resolved settings; flags override the config file, which overrides these."""

    functional: str = "fr"
    barrier: str = "sw"
    sigma: float = 0.5
    alpha: float = 1.0
    beta: float | None = None
    delta: float = 1e-3
    eps: float = 1e-3
    measure: str = "rectangles2015"
    threshold: float = 0.95
    max_iters: int = 500
    tol: float = 1e-6
    seed: int = 0
    perturb: float = 0.0

    def functional_config(self) -> FunctionalConfig:
        return FunctionalConfig(sigma=self.sigma, alpha=self.alpha, beta=self.beta,
                                delta=self.delta, eps=self.eps,
                                shape=self.functional, barrier=self.barrier)

    def smooth_options(self, trace: bool = False) -> SmoothOptions:
        return SmoothOptions(max_iters=self.max_iters, grad_tol=self.tol, eps=self.eps, trace=trace)

    def measure_kind(self) -> QuadMeasureKind:
        try:
            return QuadMeasureKind.parse(self.measure)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    try:
        if kind == "int":
            return int(raw)
        if kind == "str":
            return raw
        if kind == "float | None":
            return None if raw.lower() in ("", "none", "auto") else float(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def read_config_file(path) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected key=value", path, lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise ParseError(f"unknown config key {key!r}", path, lineno)
        out[key] = _coerce(key, value)
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for key in _TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = RunConfig(**values)
    # validate early so bad weights fail before any work
    cfg.functional_config()
    cfg.measure_kind()
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quadgrid", description="Structured quad grid generation, smoothing and quality.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key=value file; flags take precedence")
    common.add_argument("--measure", help="quality measure name (default rectangles2015)")
    common.add_argument("--threshold", type=float, help="quality gate threshold (default 0.95)")
    common.add_argument("--eps", type=float, help="eps-convexity margin (default 1e-3)")
    common.add_argument("--seed", type=int, help="seed for synthetic perturbation")

    t = sub.add_parser("tfi", parents=[common], help="generate a grid from a 4-sided contour")
    t.add_argument("contour")
    t.add_argument("m", type=int)
    t.add_argument("n", type=int)
    t.add_argument("-o", "--output", required=True)
    t.add_argument("--perturb", type=float, help="perturb interior nodes by this fraction of spacing")

    s = sub.add_parser("smooth", parents=[common], help="optimize interior nodes")
    s.add_argument("grid")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--functional", choices=["fr", "fR", "fa"], help="shape term")
    s.add_argument("--barrier", choices=["sw", "fa"], help="barrier term")
    s.add_argument("--sigma", type=float)
    s.add_argument("--alpha", type=float)
    s.add_argument("--beta", type=float)
    s.add_argument("--delta", type=float)
    s.add_argument("--max-iters", dest="max_iters", type=int)
    s.add_argument("--tol", type=float, help="relative gradient tolerance")
    s.add_argument("--trace", action="store_true", help="log every iteration to stderr")
    s.add_argument("--barrier-first", action="store_true",
                   help="untangle an infeasible input before smoothing")

    q = sub.add_parser("quality", parents=[common], help="per-cell quality statistics")
    q.add_argument("grid")

    c = sub.add_parser("colormap", parents=[common], help="write an SVG quality color map")
    c.add_argument("grid")
    c.add_argument("-o", "--output", required=True)
    return p


def _emit(summary: dict) -> None:
    print(json.dumps(summary, sort_keys=True, separators=(",", ":")))


def _maybe_distortion(g, kind):
    try:
        return grid_distortion(g, kind)
    except QuadGridError:
        return None


def cmd_tfi(args, cfg: RunConfig) -> int:
    contour = read_contour(args.contour)
    g = tfi_generate(contour, args.m, args.n)
    if cfg.perturb:
        g = perturb_interior(g, cfg.perturb, seed=cfg.seed)
    write_grid(g, args.output)
    report = is_eps_convex(g, 0.0)
    print(f"wrote {args.output}: {g.m} x {g.n} nodes, {g.num_cells} cells")
    print(report.summary())
    _emit({"command": "tfi", "output": str(args.output), "m": g.m, "n": g.n,
           "folded_cells": len(report.offending_cells),
           "min_triangle_area": report.min_triangle_area})
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


def _trace_handler() -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger = logging.getLogger("quadgrid")
    logger.addHandler(handler)
    logger.setLevel(logging.INFO)
    return handler


def cmd_smooth(args, cfg: RunConfig) -> int:
    g = read_grid(args.grid)
    fcfg = cfg.functional_config()
    opts = cfg.smooth_options(trace=args.trace)
    kind = cfg.measure_kind()
    handler = _trace_handler() if args.trace else None
    try:
        return _smooth(args, cfg, g, fcfg, opts, kind)
    finally:
        if handler is not None:
            logging.getLogger("quadgrid").removeHandler(handler)


def _smooth(args, cfg, g, fcfg, opts, kind) -> int:
    d0 = _maybe_distortion(g, kind)
    untangled = False
    if args.barrier_first and not is_eps_convex(g, cfg.eps).ok:
        g = untangle(g, eps=cfg.eps)
        untangled = True
    res = smooth(g, fcfg, opts)
    write_grid(res.grid, args.output)
    d1 = _maybe_distortion(res.grid, kind)
    print(f"iterations         {res.iterations} ({res.termination.value})")
    print(f"functional         {res.initial_value:.10g} -> {res.final_value:.10g}")
    d0_text, d1_text = ("undefined" if d is None else f"{d:.10g}" for d in (d0, d1))
    print(f"distortion ({kind.value}) {d0_text} -> {d1_text}")
    print(f"wrote {args.output}")
    _emit({"command": "smooth", "output": str(args.output), "iterations": res.iterations,
           "termination": res.termination.value, "untangled": untangled,
           "initial_value": res.initial_value, "final_value": res.final_value,
           "initial_distortion": d0, "final_distortion": d1, "measure": kind.value})
    return EXIT_OK


def cmd_quality(args, cfg: RunConfig) -> int:
    g = read_grid(args.grid)
    stats = quality_stats(g, cfg.measure_kind(), cfg.threshold)
    print(stats.table())
    passed = stats.below_threshold_count == 0
    if not passed:
        print(f"{stats.below_threshold_count} of {stats.num_cells} cells below {cfg.threshold:g}")
    _emit({"command": "quality", "passed": passed, **stats.as_dict()})
    return EXIT_OK if passed else EXIT_GATE


def cmd_colormap(args, cfg: RunConfig) -> int:
    g = read_grid(args.grid)
    kind = cfg.measure_kind()
    svg = colormap_svg(g, kind)
    try:
        Path(args.output).write_text(svg)
    except OSError as exc:
        raise OSError(f"cannot write {args.output}: {exc.strerror}") from None
    print(f"wrote {args.output}: {g.num_cells} cells, measure {kind.value}")
    _emit({"command": "colormap", "output": str(args.output), "cells": g.num_cells,
           "measure": kind.value})
    return EXIT_OK


COMMANDS = {"tfi": cmd_tfi, "smooth": cmd_smooth, "quality": cmd_quality, "colormap": cmd_colormap}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ParseError, ContourError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CellError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except QuadGridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
