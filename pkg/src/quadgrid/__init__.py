"""Structured quadrilateral grids: quality measures, TFI generation and
barrier-protected variational smoothing."""

from .errors import (
    BarrierViolation,
    CellError,
    ConfigError,
    ContourError,
    DegenerateGeometryError,
    NonconvexError,
    ParseError,
    QuadGridError,
    SelfIntersectionError,
)
from .functionals import F_A, F_R, F_d, F_p, F_r, S_w, Evaluation, FunctionalConfig, combined
from .geometry import Point, Quad, Triangle, bilinear_coeffs, convex_hull, min_area_rect
from .grid import (
    Contour,
    StructuredGrid,
    horseshoe_contour,
    is_eps_convex,
    notched_contour,
    perturb_interior,
    read_contour,
    read_grid,
    rectangle_contour,
    tfi_generate,
    uniform_grid,
    write_contour,
    write_grid,
)
from .optimizer import SmoothOptions, SmoothResult, Termination, line_search, smooth, untangle
from .quality import (
    QuadMeasureKind,
    TriangleMeasureKind,
    cell_quality,
    grid_distortion,
    measure,
)
from .report import ColorMapSpec, QualityStats, colormap_svg, quality_stats

__version__ = "0.1.0"
