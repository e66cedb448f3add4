"""Minimal polyline charts written as raw SVG markup."""

from __future__ import annotations

import math

from .errors import ValidationError

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
_W, _H = 640, 400
_PAD = 50.0


def _axis(vals, log: bool):
    lo, hi = min(vals), max(vals)
    if log:
        if lo <= 0.0:
            raise ValidationError("log axis needs positive values")
        lo, hi = math.log10(lo), math.log10(hi)
    if hi == lo:
        hi = lo + 1.0
    return lo, hi


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def polyline_chart(series, title: str = "", log_x: bool = False,
                   log_y: bool = False) -> str:
    """SVG text for labeled polylines.

    ``series`` is a list of (label, xs, ys) with equal-length positive
    coordinate sequences when the matching axis is logarithmic.
    """
    if not series:
        raise ValidationError("need at least one series")
    all_x = [float(x) for _, xs, _ in series for x in xs]
    all_y = [float(y) for _, _, ys in series for y in ys]
    x0, x1 = _axis(all_x, log_x)
    y0, y1 = _axis(all_y, log_y)

    def sx(v):
        v = math.log10(v) if log_x else v
        return _PAD + (_W - 2 * _PAD) * (v - x0) / (x1 - x0)

    def sy(v):
        v = math.log10(v) if log_y else v
        return _H - _PAD - (_H - 2 * _PAD) * (v - y0) / (y1 - y0)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
           f'height="{_H}" viewBox="0 0 {_W} {_H}">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>',
           f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" '
           f'y2="{_H - _PAD}" stroke="black"/>',
           f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" '
           f'y2="{_H - _PAD}" stroke="black"/>']
    if title:
        out.append(f'<text x="{_W / 2:.0f}" y="24" text-anchor="middle" '
                   f'font-size="14">{title}</text>')
    out.append(f'<text x="{_PAD:.0f}" y="{_H - _PAD + 18:.0f}" '
               f'font-size="11">{_fmt(x0)}{" (log10)" if log_x else ""}</text>')
    out.append(f'<text x="{_W - _PAD:.0f}" y="{_H - _PAD + 18:.0f}" '
               f'text-anchor="end" font-size="11">{_fmt(x1)}</text>')
    out.append(f'<text x="{_PAD - 6:.0f}" y="{_H - _PAD:.0f}" '
               f'text-anchor="end" font-size="11">{_fmt(y0)}'
               f'{" (log10)" if log_y else ""}</text>')
    out.append(f'<text x="{_PAD - 6:.0f}" y="{_PAD + 4:.0f}" '
               f'text-anchor="end" font-size="11">{_fmt(y1)}</text>')
    for idx, (label, xs, ys) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        pts = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}"
                       for x, y in zip(xs, ys))
        out.append(f'<polyline points="{pts}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{_W - _PAD + 4:.0f}" '
                   f'y="{_PAD + 16 * idx + 4:.0f}" font-size="11" '
                   f'fill="{color}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out)
