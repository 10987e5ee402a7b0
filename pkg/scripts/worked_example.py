"""Aspect ratios of one skewed quad under its four vertex labelings.

The minimum-rectangle ratio ignores the labels; Robinson's ratio does not.
"""

from quadgrid.geometry import convex_hull, min_area_rect
from quadgrid.quality import QuadMeasureKind, measure

QUAD = {"A": (3.53, 10.21), "B": (-10.0, -4.0), "C": (11.81, -1.38), "D": (9.27, 11.94)}


def main():
    names = "ABCD"
    rect = min_area_rect(convex_hull(QUAD.values()))
    print(f"minimum rectangle: area {rect.area:.4f}, aspect {rect.aspect:.4f}")
    for shift in range(4):
        order = names[shift:] + names[:shift]
        q = [QUAD[k] for k in order]
        robinson = measure(q, QuadMeasureKind.ROBINSON_AR)
        minrect = measure(q, QuadMeasureKind.MINRECT_AR)
        print(f"labels {','.join(order)}: robinson {robinson:.4f}  minrect {minrect:.4f}")
    for kind in QuadMeasureKind:
        if kind.value not in ("robinson-ar", "minrect-ar"):
            print(f"{kind.value:24s} {measure(list(QUAD.values()), kind):.6f}")


if __name__ == "__main__":
    main()
