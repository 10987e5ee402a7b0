"""Exception types shared across the package."""


class QuadGridError(Exception):
    """Base class for all errors raised by quadgrid."""


class DegenerateGeometryError(QuadGridError, ValueError):
    """Input collapses (zero-length side, zero area, collinear points)."""


class SelfIntersectionError(QuadGridError, ValueError):
    """A quadrilateral or contour crosses itself."""


class NonconvexError(QuadGridError, ValueError):
    """A measure defined only on convex cells received a nonconvex one."""


class CellError(QuadGridError, ValueError):
    """A per-cell evaluation failed; ``cells`` lists the offending (i, j)."""

    def __init__(self, message, cells=()):
        self.cells = [tuple(int(v) for v in c) for c in cells]
        if self.cells:
            shown = ", ".join(f"({i},{j})" for i, j in self.cells[:10])
            more = "" if len(self.cells) <= 10 else f" (+{len(self.cells) - 10} more)"
            message = f"{message}: cells {shown}{more}"
        super().__init__(message)


class BarrierViolation(CellError):
    """Grid lies outside the domain of a barrier functional (folded or collapsed cell)."""


class ConfigError(QuadGridError, ValueError):
    """Invalid functional or optimizer configuration."""


class ContourError(QuadGridError, ValueError):
    """Boundary contour is not closed, too short, or self-intersecting."""


class ParseError(QuadGridError, ValueError):
    """Malformed contour or grid file."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
