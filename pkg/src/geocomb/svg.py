"""Minimal SVG emission for 2-d projections of models and paths."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _viewbox(xys: list[tuple[float, float]], pad: float = 0.5) -> tuple[float, float, float, float]:
    xs = [p[0] for p in xys]
    ys = [p[1] for p in xys]
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    return x0, y0, x1 - x0, y1 - y0


def render_svg(
    polylines: list[tuple[list[tuple[float, float]], str]],
    points: list[tuple[float, float, str]] | None = None,
    width: int = 480,
) -> str:
    """polylines: [(xy list, css color)]; points: [(x, y, color)]."""
    all_xy = [xy for line, _ in polylines for xy in line] + [
        (x, y) for x, y, _ in (points or [])
    ]
    if not all_xy:
        all_xy = [(0.0, 0.0), (1.0, 1.0)]
    x0, y0, w, h = _viewbox(all_xy)
    scale = width / w
    height = int(np.ceil(h * scale))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{x0:.4f} {y0:.4f} {w:.4f} {h:.4f}">',
        f'<g transform="translate(0,{(2 * y0 + h):.4f}) scale(1,-1)">',
    ]
    stroke = max(w, h) / 200.0
    for line, color in polylines:
        pts = " ".join(f"{x:.5f},{y:.5f}" for x, y in line)
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{stroke:.5f}"/>'
        )
    for x, y, color in points or []:
        parts.append(f'<circle cx="{x:.5f}" cy="{y:.5f}" r="{2 * stroke:.5f}" fill="{color}"/>')
    parts.append("</g></svg>")
    return "\n".join(parts)


def write_svg(path: str | Path, svg: str) -> None:
    Path(path).write_text(svg + "\n")


def complex_svg(complex_, axes: tuple[int, int] = (0, 1)) -> str:
    """Draw a hull's 1-skeleton and 2-cells in a chosen coordinate pair."""
    lines = []
    pts = []
    for cell in complex_.cells:
        proj = [(float(v[axes[0]]), float(v[axes[1]])) for v in cell.vertices]
        if cell.dim == 0:
            pts.append((proj[0][0], proj[0][1], "#d33"))
        elif cell.dim == 1:
            lines.append((proj, "#07c"))
        else:
            hull = _convex_order(proj)
            lines.append((hull + hull[:1], "#2a4"))
    return render_svg(lines, pts)


def _convex_order(xys: list[tuple[float, float]]) -> list[tuple[float, float]]:
    c = np.mean(np.asarray(xys), axis=0)
    return sorted(xys, key=lambda p: np.arctan2(p[1] - c[1], p[0] - c[0]))


def paths_svg(space, paths: list, colors: list[str] | None = None) -> str:
    colors = colors or ["#07c", "#d33", "#2a4", "#a3c", "#f80"]
    lines = []
    for k, path in enumerate(paths):
        xy = [space.draw_xy(p) for p in path.points]
        lines.append((xy, colors[k % len(colors)]))
    return render_svg(lines)
