"""Minimal self-contained SVG 1.1 emitter for the plotting subcommands.

Only the small feature set the command-line plots need: a data-space to
pixel-space mapping, polylines, circles, axis frames with ticks, and
cell-based heatmaps.  Output is deterministic: no timestamps, fixed
float formatting, and a single version comment line near the top.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Canvas", "color_scale"]

_VERSION_COMMENT = "<!-- generator: confocal 0.1.0 -->"


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return s.rstrip("0").rstrip(".") if "." in s else s


def color_scale(t: float) -> str:
    """Dark-blue to yellow color ramp on [0, 1]."""
    t = min(1.0, max(0.0, t))
    stops = [(0.0, (13, 8, 135)), (0.33, (126, 3, 168)),
             (0.66, (225, 100, 98)), (1.0, (240, 249, 33))]
    for (t0, c0), (t1, c1) in zip(stops, stops[1:]):
        if t <= t1:
            u = (t - t0) / (t1 - t0)
            rgb = [round(a + u * (b - a)) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#f0f921"


@dataclass
class Canvas:
    """A fixed-size drawing surface with one data-space viewport."""

    width: int = 640
    height: int = 480
    xlim: tuple[float, float] = (0.0, 1.0)
    ylim: tuple[float, float] = (0.0, 1.0)
    margin: int = 54
    title: str = ""
    _body: list[str] = field(default_factory=list)

    def map(self, x: float, y: float) -> tuple[float, float]:
        """Data coordinates to pixel coordinates (y axis points up)."""
        x0, x1 = self.xlim
        y0, y1 = self.ylim
        px = self.margin + (x - x0) / (x1 - x0) * (self.width - 2 * self.margin)
        py = self.height - self.margin \
            - (y - y0) / (y1 - y0) * (self.height - 2 * self.margin)
        return px, py

    def polyline(self, points, stroke: str = "#000000", width: float = 1.2,
                 dash: str | None = None, opacity: float = 1.0) -> None:
        if len(points) < 2:
            return
        coords = " ".join("{},{}".format(*map(_fmt, self.map(x, y)))
                          for x, y in points)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        op = f' stroke-opacity="{_fmt(opacity)}"' if opacity < 1.0 else ""
        self._body.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}"'
            f' stroke-width="{_fmt(width)}"{dash_attr}{op}/>')

    def circle(self, x: float, y: float, radius: float = 2.5,
               fill: str = "#000000") -> None:
        px, py = self.map(x, y)
        self._body.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}"'
                          f' r="{_fmt(radius)}" fill="{fill}"/>')

    def cell(self, x0: float, y0: float, x1: float, y1: float,
             fill: str) -> None:
        """Filled axis-aligned rectangle given in data coordinates."""
        px0, py0 = self.map(x0, y1)
        px1, py1 = self.map(x1, y0)
        self._body.append(
            f'<rect x="{_fmt(px0)}" y="{_fmt(py0)}"'
            f' width="{_fmt(px1 - px0 + 0.35)}"'
            f' height="{_fmt(py1 - py0 + 0.35)}" fill="{fill}"/>')

    def text(self, x: float, y: float, s: str, size: int = 12,
             anchor: str = "middle", data_space: bool = True) -> None:
        px, py = self.map(x, y) if data_space else (x, y)
        self._body.append(
            f'<text x="{_fmt(px)}" y="{_fmt(py)}" font-size="{size}"'
            f' font-family="sans-serif" text-anchor="{anchor}">{s}</text>')

    def frame(self, xlabel: str = "", ylabel: str = "",
              ticks: int = 5) -> None:
        """Plot frame with evenly spaced labelled ticks."""
        x0, x1 = self.xlim
        y0, y1 = self.ylim
        self.polyline([(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)],
                      stroke="#444444", width=1.0)
        for k in range(ticks + 1):
            xt = x0 + k * (x1 - x0) / ticks
            yt = y0 + k * (y1 - y0) / ticks
            px, py = self.map(xt, y0)
            self._body.append(f'<line x1="{_fmt(px)}" y1="{_fmt(py)}"'
                              f' x2="{_fmt(px)}" y2="{_fmt(py + 5)}"'
                              ' stroke="#444444" stroke-width="1"/>')
            self.text(px, py + 18, f"{xt:.3g}", size=10, data_space=False)
            px, py = self.map(x0, yt)
            self._body.append(f'<line x1="{_fmt(px - 5)}" y1="{_fmt(py)}"'
                              f' x2="{_fmt(px)}" y2="{_fmt(py)}"'
                              ' stroke="#444444" stroke-width="1"/>')
            self.text(px - 8, py + 4, f"{yt:.3g}", size=10,
                      anchor="end", data_space=False)
        if xlabel:
            self.text(0.5 * (self.width), self.height - 12, xlabel,
                      data_space=False)
        if ylabel:
            self.text(16, 0.5 * self.height, ylabel, data_space=False)
        if self.title:
            self.text(0.5 * self.width, 22, self.title, size=14,
                      data_space=False)

    def render(self) -> str:
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f"{_VERSION_COMMENT}\n"
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1"'
                f' width="{self.width}" height="{self.height}"'
                f' viewBox="0 0 {self.width} {self.height}">\n'
                '<rect width="100%" height="100%" fill="#ffffff"/>\n')
        return head + "\n".join(self._body) + "\n</svg>\n"
