#!/usr/bin/env python3
"""Plot the frequency-range boundaries of all four caustic types."""

import argparse

from confocal.bifurcation import TYPE_SIGMA, range_boundary
from confocal.cli import parse_axes, write_atomic
from confocal.svg import Canvas

COLORS = {"EH1": "#d62728", "H1H1": "#9467bd",
          "EH2": "#17becf", "H1H2": "#8c564b"}

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--axes", default="1,0.58,0.46")
    ap.add_argument("--out", default="range_borders.svg")
    args = ap.parse_args()
    e = parse_axes(args.axes)
    c, b, a = e.semiaxes
    cv = Canvas(xlim=(0.0, 0.55), ylim=(0.0, 0.55),
                title=f"frequency ranges a={a:g} b={b:g} c={c:g}")
    for name in TYPE_SIGMA:
        rb = range_boundary(a, b, c, name)
        cv.polyline([tuple(p) for p in rb.points],
                    stroke=COLORS[name], width=1.4)
    cv.frame(xlabel="omega1", ylabel="omega2")
    write_atomic(args.out, cv.render())
    print(f"wrote {args.out}")
