"""tfi -> smooth -> quality -> colormap on the horseshoe contour, through the CLI."""

import argparse
import sys
from pathlib import Path

from quadgrid.cli import main as cli
from quadgrid.grid import horseshoe_contour, write_contour


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--radial", type=int, default=8, help="nodes across the band")
    p.add_argument("--along", type=int, default=40, help="nodes along the arcs")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", type=Path, default=Path("out"))
    args = p.parse_args()

    d = args.out
    d.mkdir(parents=True, exist_ok=True)
    write_contour(horseshoe_contour(), d / "horseshoe.txt")
    steps = [
        ["tfi", d / "horseshoe.txt", args.radial, args.along, "-o", d / "horseshoe_tfi.grid"],
        ["colormap", d / "horseshoe_tfi.grid", "-o", d / "horseshoe_tfi.svg"],
        ["smooth", d / "horseshoe_tfi.grid", "-o", d / "horseshoe_smooth.grid"],
        ["colormap", d / "horseshoe_smooth.grid", "-o", d / "horseshoe_smooth.svg"],
        ["quality", d / "horseshoe_smooth.grid", "--threshold", args.threshold],
    ]
    for argv in steps:
        argv = [str(a) for a in argv]
        print("$ quadgrid " + " ".join(argv))
        code = cli(argv)
        if code:
            print(f"step {argv[0]} exited {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
