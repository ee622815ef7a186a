"""Minimal deterministic SVG line/point plots.

Hand-rolled so identical inputs produce byte-identical files: fixed float
formatting, no timestamps, no generated ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PALETTE = ["#1f6fb4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"]


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str = ""
    color: str | None = None
    kind: str = "line"  # line | points | stars
    width: float = 1.0


def _fmt(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError("non-finite coordinate in plot data")
    return f"{v:.4f}".rstrip("0").rstrip(".")


def render_svg(series: list[Series], path: str, *, title: str = "",
               xlabel: str = "", ylabel: str = "", width: int = 720,
               height: int = 520, equal_axes: bool = False) -> str:
    """Write a standalone SVG with the given series; returns the path."""
    if not series:
        raise ValueError("no series to plot")
    for s in series:
        if np.asarray(s.x).size == 0 or np.asarray(s.y).size == 0:
            raise ValueError(f"series {s.label!r} is empty")
    xs = np.concatenate([np.asarray(s.x, float) for s in series])
    ys = np.concatenate([np.asarray(s.y, float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 - x0 < 1e-300:
        x0, x1 = x0 - 1.0, x1 + 1.0
    if y1 - y0 < 1e-300:
        y0, y1 = y0 - 1.0, y1 + 1.0
    if equal_axes:
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        half = 0.5 * max(x1 - x0, y1 - y0)
        x0, x1 = cx - half, cx + half
        y0, y1 = cy - half, cy + half
    pad = 50
    pw, ph = width - 2 * pad, height - 2 * pad

    def px(x):
        return pad + (x - x0) / (x1 - x0) * pw

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
           f'height="{height}" viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<rect x="{pad}" y="{pad}" width="{pw}" height="{ph}" '
           f'fill="none" stroke="#888" stroke-width="1"/>']
    if title:
        out.append(f'<text x="{width // 2}" y="24" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="15">{title}</text>')
    if xlabel:
        out.append(f'<text x="{width // 2}" y="{height - 12}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="12">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{height // 2}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="12" '
                   f'transform="rotate(-90 16 {height // 2})">{ylabel}</text>')
    for tick in np.linspace(x0, x1, 5):
        out.append(f'<text x="{_fmt(px(tick))}" y="{height - pad + 16}" '
                   f'text-anchor="middle" font-family="sans-serif" '
                   f'font-size="10">{_fmt(tick)}</text>')
    for tick in np.linspace(y0, y1, 5):
        out.append(f'<text x="{pad - 6}" y="{_fmt(py(tick) + 3)}" '
                   f'text-anchor="end" font-family="sans-serif" '
                   f'font-size="10">{_fmt(tick)}</text>')

    for i, s in enumerate(series):
        color = s.color or PALETTE[i % len(PALETTE)]
        X = np.asarray(s.x, float)
        Y = np.asarray(s.y, float)
        if s.kind == "line":
            pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(X, Y))
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                       f'stroke-width="{_fmt(s.width)}"/>')
        elif s.kind == "points":
            for a, b in zip(X, Y):
                out.append(f'<circle cx="{_fmt(px(a))}" cy="{_fmt(py(b))}" '
                           f'r="2" fill="{color}"/>')
        elif s.kind == "stars":
            for a, b in zip(X, Y):
                cx, cy = px(a), py(b)
                out.append(f'<path d="M {_fmt(cx - 4)} {_fmt(cy)} L {_fmt(cx + 4)} '
                           f'{_fmt(cy)} M {_fmt(cx)} {_fmt(cy - 4)} L {_fmt(cx)} '
                           f'{_fmt(cy + 4)} M {_fmt(cx - 3)} {_fmt(cy - 3)} L '
                           f'{_fmt(cx + 3)} {_fmt(cy + 3)} M {_fmt(cx - 3)} '
                           f'{_fmt(cy + 3)} L {_fmt(cx + 3)} {_fmt(cy - 3)}" '
                           f'stroke="{color}" stroke-width="1.2" fill="none"/>')
        else:
            raise ValueError(f"unknown series kind {s.kind!r}")
        if s.label:
            ly = pad + 16 + 14 * i
            out.append(f'<rect x="{width - pad - 120}" y="{ly - 8}" width="10" '
                       f'height="10" fill="{color}"/>')
            out.append(f'<text x="{width - pad - 106}" y="{ly}" '
                       f'font-family="sans-serif" font-size="11">{s.label}</text>')
    out.append("</svg>")
    data = "\n".join(out) + "\n"
    with open(path, "w", newline="\n") as fh:
        fh.write(data)
    return path
