"""Per-cell quality statistics and SVG color maps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CellError
from .grid import StructuredGrid, corner_areas
from .quality import QuadMeasureKind, cell_values

NUM_BINS = 20


@dataclass(frozen=True)
class QualityStats:
    """Summary of ``cell_quality`` over a grid.

    Histogram bins split [0, 1] into 20 right-open bins (the last one closed);
    values below 0 land in the first bin and values above 1 in the last.
    """

    measure: QuadMeasureKind
    min: float
    max: float
    mean: float
    histogram: tuple[int, ...]
    below_threshold_count: int
    threshold: float
    num_cells: int
    worst_cell: tuple[int, int]
    nonconvex_cells: tuple[tuple[int, int], ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "cells": self.num_cells,
            "min": self.min,
            "mean": self.mean,
            "max": self.max,
            "threshold": self.threshold,
            "below_threshold": self.below_threshold_count,
            "nonconvex": len(self.nonconvex_cells),
            "worst_cell": list(self.worst_cell),
            "histogram": list(self.histogram),
        }

    def table(self) -> str:
        rows = [
            ("measure", self.measure.value),
            ("cells", str(self.num_cells)),
            ("min", f"{self.min:.6f}"),
            ("mean", f"{self.mean:.6f}"),
            ("max", f"{self.max:.6f}"),
            ("worst cell", f"({self.worst_cell[0]}, {self.worst_cell[1]})"),
            (f"below {self.threshold:g}", str(self.below_threshold_count)),
            ("nonconvex", str(len(self.nonconvex_cells))),
        ]
        width = max(len(k) for k, _ in rows)
        lines = [f"{k:<{width}}  {v}" for k, v in rows]
        lines.append("histogram:")
        peak = max(self.histogram) or 1
        for b, count in enumerate(self.histogram):
            lo, hi = b / NUM_BINS, (b + 1) / NUM_BINS
            bar = "#" * round(30 * count / peak)
            close = "]" if b == NUM_BINS - 1 else ")"
            lines.append(f"  [{lo:.2f}, {hi:.2f}{close} {count:6d} {bar}")
        return "\n".join(lines)


def bin_index(value: float) -> int:
    return min(max(int(math.floor(value * NUM_BINS)), 0), NUM_BINS - 1)


def nonconvex_cells(g: StructuredGrid) -> list[tuple[int, int]]:
    bad = (corner_areas(g) <= 0.0).any(-1)
    return [(i, j) for j in range(g.n - 1) for i in range(g.m - 1) if bad[j, i]]


def quality_stats(g: StructuredGrid, kind: QuadMeasureKind, threshold: float = 0.95) -> QualityStats:
    if isinstance(kind, str):
        kind = QuadMeasureKind.parse(kind)
    if g.m < 2 or g.n < 2 or g.num_cells == 0:
        raise CellError("grid has no cells")
    values = cell_values(g, kind)
    hist = [0] * NUM_BINS
    for _, v in values:
        hist[bin_index(v)] += 1
    vs = [v for _, v in values]
    lo, hi = min(vs), max(vs)
    mean = min(max(math.fsum(vs) / len(vs), lo), hi)
    worst = min(values, key=lambda item: item[1])[0]
    return QualityStats(
        measure=kind,
        min=lo,
        max=hi,
        mean=mean,
        histogram=tuple(hist),
        below_threshold_count=sum(v < threshold for v in vs),
        threshold=threshold,
        num_cells=len(vs),
        worst_cell=worst,
        nonconvex_cells=tuple(nonconvex_cells(g)),
    )


# -- color maps ---------------------------------------------------------------

RGB = tuple[int, int, int]


@dataclass(frozen=True)
class ColorMapSpec:
    palette: tuple[tuple[float, RGB], ...] = (
        (0.0, (0, 0, 255)),
        (0.25, (0, 255, 255)),
        (0.5, (0, 255, 0)),
        (0.75, (255, 255, 0)),
        (1.0, (255, 0, 0)),
    )
    clamp: tuple[float, float] = (0.0, 1.0)
    out_of_range: RGB = (160, 160, 160)

    def __post_init__(self):
        vals = [v for v, _ in self.palette]
        if len(vals) < 2 or vals[0] != 0.0 or vals[-1] != 1.0:
            raise ValueError("palette must start at 0 and end at 1")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("palette values must be strictly increasing")

    def color(self, value: float) -> RGB:
        lo, hi = self.clamp
        t = (min(max(value, lo), hi) - lo) / (hi - lo)
        for (v0, c0), (v1, c1) in zip(self.palette, self.palette[1:]):
            if t <= v1:
                w = (t - v0) / (v1 - v0)
                return tuple(round(a + w * (b - a)) for a, b in zip(c0, c1))
        return self.palette[-1][1]


def _hex(c: RGB) -> str:
    return "#{:02x}{:02x}{:02x}".format(*c)


def _num(x: float) -> str:
    s = f"{x:.6g}"
    return "0" if s == "-0" else s


def colormap_svg(
    g: StructuredGrid,
    kind: QuadMeasureKind,
    spec: ColorMapSpec = ColorMapSpec(),
    width_px: int = 800,
    title: str | None = None,
) -> str:
    """SVG document with one filled polygon per cell and a legend bar.

    Cells with a negative value or a nonpositive corner triangle are drawn
    in ``spec.out_of_range``.
    """
    if isinstance(kind, str):
        kind = QuadMeasureKind.parse(kind)
    values = cell_values(g, kind)
    flagged = set(nonconvex_cells(g))

    xmin, ymin, xmax, ymax = g.bounds()
    w, h = xmax - xmin, ymax - ymin
    size = max(w, h) or 1.0
    mx, my = 0.02 * (w or size), 0.02 * (h or size)
    vb = (xmin - mx, ymin - my, w + 2 * mx, h + 2 * my)
    map_h = max(1, round(width_px * vb[3] / vb[2]))
    legend_h = 60
    stroke = 0.0015 * size

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width_px}" height="{map_h + legend_h}">',
    ]
    label = title or f"{kind.value} quality"
    out.append(f"<title>{label}</title>")
    out.append(
        f'<svg x="0" y="0" width="{width_px}" height="{map_h}" '
        f'viewBox="{" ".join(_num(v) for v in vb)}" preserveAspectRatio="xMidYMid meet">'
    )
    # flip y so the grid is drawn with y pointing up
    out.append(f'<g transform="matrix(1 0 0 -1 0 {_num(ymin + ymax)})" '
               f'stroke="#000000" stroke-width="{_num(stroke)}">')
    for (i, j), v in values:
        fill = spec.out_of_range if (v < 0 or (i, j) in flagged) else spec.color(v)
        q = g.cell(i, j).vertices
        pts = " ".join(f"{_num(x)},{_num(y)}" for x, y in q)
        out.append(f'<polygon id="c{i}_{j}" points="{pts}" fill="{_hex(fill)}"/>')
    out.append("</g>")
    out.append("</svg>")

    # legend: gradient bar with labelled ends
    bar_x, bar_w, bar_y = 40, width_px - 80, map_h + 10
    out.append("<defs>")
    out.append('<linearGradient id="legend" x1="0" y1="0" x2="1" y2="0">')
    for v, c in spec.palette:
        out.append(f'<stop offset="{_num(v)}" stop-color="{_hex(c)}"/>')
    out.append("</linearGradient>")
    out.append("</defs>")
    out.append(f'<rect x="{bar_x}" y="{bar_y}" width="{bar_w}" height="16" '
               f'fill="url(#legend)" stroke="#000000" stroke-width="0.5"/>')
    lo, hi = spec.clamp
    out.append(f'<text x="{bar_x}" y="{bar_y + 32}" font-size="12" '
               f'text-anchor="middle">{_num(lo)}</text>')
    out.append(f'<text x="{bar_x + bar_w}" y="{bar_y + 32}" font-size="12" '
               f'text-anchor="middle">{_num(hi)}</text>')
    out.append(f'<text x="{bar_x + bar_w / 2:g}" y="{bar_y + 32}" font-size="12" '
               f'text-anchor="middle">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
