"""Perturb a 20x20 unit-square grid, smooth it, write before/after color maps."""

import argparse
from pathlib import Path

import numpy as np

from quadgrid import FunctionalConfig, SmoothOptions, perturb_interior, smooth, uniform_grid
from quadgrid.quality import QuadMeasureKind, cell_values, grid_distortion
from quadgrid.report import colormap_svg

R15 = QuadMeasureKind.RECTANGLES2015


def summary(label, g):
    vals = [v for _, v in cell_values(g, R15)]
    print(f"{label:7s} mean {np.mean(vals):.6f}  min {np.min(vals):.6f}  "
          f"distortion {grid_distortion(g, R15):.6f}")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--size", type=int, default=20)
    p.add_argument("--perturb", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--out", type=Path, default=Path("out"))
    args = p.parse_args()

    g0 = perturb_interior(uniform_grid(args.size, args.size), args.perturb, seed=args.seed)
    res = smooth(g0, FunctionalConfig(sigma=args.sigma, eps=1e-3), SmoothOptions(eps=1e-3))
    print(f"{res.iterations} iterations ({res.termination.value}), "
          f"functional {res.initial_value:.6g} -> {res.final_value:.6g}")
    summary("before", g0)
    summary("after", res.grid)

    args.out.mkdir(parents=True, exist_ok=True)
    for name, g in (("before", g0), ("after", res.grid)):
        path = args.out / f"square_{name}.svg"
        path.write_text(colormap_svg(g, R15, title=f"rectangles2015, {name} smoothing"))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
