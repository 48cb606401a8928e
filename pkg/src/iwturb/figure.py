"""Standalone SVG rendering of the (x, y) exponent-plane figure."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

import contourpy
import numpy as np

from .collision import Status
from .formats import _write
from .observations import REFERENCE_POINTS, Basis, ObservationRecord
from .zero_curve import CurvePoint, GridField

FRAME = ((1.0, 5.0), (-1.5, 2.5))
LEVELS = (0.02, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8)
WIDTH, HEIGHT = 640, 600
MARGIN = dict(left=70, right=30, top=40, bottom=60)


@dataclass
class FigureBundle:
    grid: GridField
    curve: list[CurvePoint]
    observations: list[ObservationRecord]
    reference_points: tuple = REFERENCE_POINTS
    frame: tuple = FRAME
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if tuple((lab, float(x), float(y)) for lab, x, y in self.reference_points) != REFERENCE_POINTS:
            raise ValueError("reference points must be the exact solution, GM and equipartition dots")


def curve_y_at(curve, x: float) -> float | None:
    """Linear interpolation of the traced curve; None outside its x-range."""
    pts = sorted((p.x, p.y) for p in curve)
    if not pts or x < pts[0][0] - 1e-12 or x > pts[-1][0] + 1e-12:
        return None
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return float(np.interp(x, xs, ys))


def proximity(curve, records) -> list[tuple[str, float]]:
    """``(name, |y_obs - y_curve|)`` at each vertical-basis midpoint.

    The distance is infinite where the curve does not reach the midpoint's x.
    """
    out = []
    for r in records:
        if r.basis is not Basis.VERTICAL:
            continue
        x, y = r.midpoint
        yc = curve_y_at(curve, x)
        out.append((r.name, math.inf if yc is None else abs(y - yc)))
    return out


class _Frame:
    def __init__(self, frame):
        (self.x0, self.x1), (self.y0, self.y1) = frame
        self.pw = WIDTH - MARGIN["left"] - MARGIN["right"]
        self.ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(self, x):
        return MARGIN["left"] + (x - self.x0) / (self.x1 - self.x0) * self.pw

    def py(self, y):
        return MARGIN["top"] + (self.y1 - y) / (self.y1 - self.y0) * self.ph

    def pt(self, x, y):
        return f"{self.px(x):.2f},{self.py(y):.2f}"


def _contour_field(grid: GridField):
    z = grid.normalized.astype(float)
    if grid.regularized:
        mask = ~np.isfinite(z)
    else:
        mask = (grid.status != Status.CONVERGED.value) | ~np.isfinite(z)
    return np.ma.masked_array(z, mask=mask)


def _divergent_path(grid: GridField, fr: _Frame) -> str:
    xs, ys = grid.x_axis, grid.y_axis
    dx = np.diff(xs).mean() if xs.size > 1 else 0.0
    dy = np.diff(ys).mean() if ys.size > 1 else 0.0
    parts = []
    for j, i in zip(*np.nonzero(grid.status == Status.DIVERGENT.value)):
        x0, x1 = max(xs[i] - dx / 2, fr.x0), min(xs[i] + dx / 2, fr.x1)
        y0, y1 = max(ys[j] - dy / 2, fr.y0), min(ys[j] + dy / 2, fr.y1)
        parts.append(f"M{fr.pt(x0, y1)}H{fr.px(x1):.2f}V{fr.py(y0):.2f}H{fr.px(x0):.2f}Z")
    return "".join(parts)


def render_figure(bundle: FigureBundle, destination=None) -> bytes:
    grid = bundle.grid
    z = _contour_field(grid)
    if np.count_nonzero(~z.mask) < 4:
        raise ValueError("fewer than 2x2 usable grid cells; nothing to contour")
    if not bundle.curve:
        raise ValueError("zero curve is empty")
    fr = _Frame(bundle.frame)

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(WIDTH),
        height=str(HEIGHT),
        viewBox=f"0 0 {WIDTH} {HEIGHT}",
    )
    ET.SubElement(svg, "title").text = "Zero set of the collision integral and ocean observations"
    ET.SubElement(svg, "style").text = (
        ".contour-pos{stroke:#c0392b;fill:none;stroke-width:0.8}"
        ".contour-neg{stroke:#2c5aa0;fill:none;stroke-width:0.8;stroke-dasharray:3,2}"
        ".zero-curve{stroke:#000;fill:none;stroke-width:2}"
        ".obs{fill:#2e8b57;stroke:#000;stroke-width:0.6}"
        ".obs-segment{stroke:#2e8b57;stroke-width:3;stroke-linecap:round}"
        ".ref-dot{fill:#e00;stroke:#000;stroke-width:0.6}"
        ".divergent{fill:#999;fill-opacity:0.25;stroke:none}"
        "text{font-family:sans-serif;font-size:12px}"
    )
    clip = ET.SubElement(ET.SubElement(svg, "defs"), "clipPath", id="plot-area")
    ET.SubElement(clip, "rect", x=str(MARGIN["left"]), y=str(MARGIN["top"]), width=str(fr.pw), height=str(fr.ph))
    plot = ET.SubElement(svg, "g", {"clip-path": "url(#plot-area)"})

    d = _divergent_path(grid, fr)
    if d:
        ET.SubElement(plot, "path", {"class": "divergent", "id": "divergent-cells", "d": d})

    gen = contourpy.contour_generator(grid.x_axis, grid.y_axis, z, line_type=contourpy.LineType.Separate)
    for family, sign in (("contour-pos", 1.0), ("contour-neg", -1.0)):
        g = ET.SubElement(plot, "g", {"class": f"contour-family {family}", "id": family})
        for lev in LEVELS:
            for line in gen.lines(sign * lev):
                if len(line) < 2:
                    continue
                pts = " ".join(fr.pt(x, y) for x, y in line)
                ET.SubElement(g, "polyline", {"class": family, "points": pts, "data-level": f"{sign * lev:g}"})

    curve = sorted(bundle.curve, key=lambda p: p.x)
    ET.SubElement(
        plot,
        "polyline",
        {"class": "zero-curve", "id": "zero-curve", "points": " ".join(fr.pt(p.x, p.y) for p in curve)},
    )

    obs = ET.SubElement(svg, "g", id="observations")
    for r in bundle.observations:
        if r.segment is not None:
            (xa, ya), (xb, yb) = r.segment
            el = ET.SubElement(
                obs,
                "line",
                {
                    "class": "obs-marker obs-segment",
                    "x1": f"{fr.px(xa):.2f}",
                    "y1": f"{fr.py(ya):.2f}",
                    "x2": f"{fr.px(xb):.2f}",
                    "y2": f"{fr.py(yb):.2f}",
                },
            )
        else:
            x, y = r.midpoint
            el = ET.SubElement(
                obs, "circle", {"class": "obs-marker obs", "cx": f"{fr.px(x):.2f}", "cy": f"{fr.py(y):.2f}", "r": "5"}
            )
        el.set("data-name", r.name)
        x, y = r.midpoint
        lab = ET.SubElement(obs, "text", {"class": "obs-label", "x": f"{fr.px(x) + 7:.2f}", "y": f"{fr.py(y) - 6:.2f}"})
        lab.text = r.name + (" (k basis)" if r.basis is Basis.HORIZONTAL else "")

    refs = ET.SubElement(svg, "g", id="reference-points")
    for label, x, y in bundle.reference_points:
        g = ET.SubElement(refs, "g", {"class": "ref-point", "data-label": label})
        ET.SubElement(g, "circle", {"class": "ref-dot", "cx": f"{fr.px(x):.2f}", "cy": f"{fr.py(y):.2f}", "r": "5"})
        t = ET.SubElement(g, "text", {"class": "ref-label", "x": f"{fr.px(x) + 7:.2f}", "y": f"{fr.py(y) + 15:.2f}"})
        t.text = f"{label} ({x:g}, {y:g})"

    _axes(svg, fr)
    legend = ET.SubElement(svg, "text", {"class": "legend", "x": str(MARGIN["left"]), "y": "24"})
    mode = "fixed-depth I" if grid.regularized else "I (converged cells only)"
    legend.text = f"contours of {mode} / reference scale: red > 0, blue < 0; black: traced zero curve"

    ET.indent(svg)
    out = ET.tostring(svg, encoding="utf-8", xml_declaration=True) + b"\n"
    _write(out, destination)
    return out


def _axes(svg, fr: _Frame):
    ax = ET.SubElement(svg, "g", id="axes")
    ET.SubElement(
        ax,
        "rect",
        {"x": str(MARGIN["left"]), "y": str(MARGIN["top"]), "width": str(fr.pw), "height": str(fr.ph)},
        fill="none",
        stroke="#000",
    )
    bottom = MARGIN["top"] + fr.ph
    for xt in np.arange(math.ceil(fr.x0 * 2) / 2, fr.x1 + 1e-9, 0.5):
        X = fr.px(xt)
        ET.SubElement(ax, "line", {"class": "tick", "x1": f"{X:.2f}", "x2": f"{X:.2f}", "y1": str(bottom), "y2": str(bottom + 5)}, stroke="#000")
        t = ET.SubElement(ax, "text", {"class": "tick-label", "x": f"{X:.2f}", "y": str(bottom + 18), "text-anchor": "middle"})
        t.text = f"{xt:g}"
    for yt in np.arange(math.ceil(fr.y0 * 2) / 2, fr.y1 + 1e-9, 0.5):
        Y = fr.py(yt)
        left = MARGIN["left"]
        ET.SubElement(ax, "line", {"class": "tick", "x1": str(left - 5), "x2": str(left), "y1": f"{Y:.2f}", "y2": f"{Y:.2f}"}, stroke="#000")
        t = ET.SubElement(ax, "text", {"class": "tick-label", "x": str(left - 8), "y": f"{Y + 4:.2f}", "text-anchor": "end"})
        t.text = f"{yt:g}"
    t = ET.SubElement(ax, "text", {"class": "axis-label", "x": f"{MARGIN['left'] + fr.pw / 2:.2f}", "y": str(HEIGHT - 15), "text-anchor": "middle"})
    t.text = "x"
    t = ET.SubElement(ax, "text", {"class": "axis-label", "x": "20", "y": f"{MARGIN['top'] + fr.ph / 2:.2f}", "text-anchor": "middle"})
    t.text = "y"
