"""Minimal SVG histogram plots (bars, axes, optional curve overlay)."""

import math
from xml.sax.saxutils import escape

WIDTH = 480
HEIGHT = 360
MARGIN_LEFT = 56
MARGIN_RIGHT = 16
MARGIN_TOP = 32
MARGIN_BOTTOM = 44


def nice_ticks(lo, hi, target=6):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [k * step for k in range(first, last + 1)]


def _fmt(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:g}" if abs(v) >= 1e-12 else "0"


def histogram_svg(series, title="", xlabel="", ylabel="density", curve=None, xrange=None):
    """Render overlaid histograms.

    ``series`` is a list of ``(bins, fill)`` where ``bins`` holds
    ``(lo, hi, height)`` triples with finite edges.  ``curve`` is an optional
    list of ``(x, y)`` points drawn as a black polyline.
    """
    finite = [(lo, hi, h) for bins, _ in series for lo, hi, h in bins]
    if xrange is None:
        xmin = min(lo for lo, _, _ in finite)
        xmax = max(hi for _, hi, _ in finite)
    else:
        xmin, xmax = xrange
    ymax = max([h for _, _, h in finite] + [y for _, y in (curve or [])] + [1e-12])
    ymax *= 1.08

    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x):
        return MARGIN_LEFT + (x - xmin) / (xmax - xmin) * pw

    def sy(y):
        return MARGIN_TOP + ph - y / ymax * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle" font-size="13">'
                   f"{escape(title)}</text>")
    for bins, fill in series:
        out.append(f'<g fill="{fill}" fill-opacity="0.75" stroke="black" stroke-width="0.5">')
        for lo, hi, h in bins:
            if h <= 0 or hi <= xmin or lo >= xmax:
                continue
            x0, x1 = sx(max(lo, xmin)), sx(min(hi, xmax))
            y0 = sy(h)
            out.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(x1 - x0)}" '
                       f'height="{_fmt(sy(0) - y0)}"/>')
        out.append("</g>")
    if curve:
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in curve if xmin <= x <= xmax)
        out.append(f'<polyline fill="none" stroke="black" stroke-width="1.5" points="{pts}"/>')

    # axes
    x_axis_y = sy(0)
    out.append(f'<line x1="{MARGIN_LEFT}" y1="{_fmt(x_axis_y)}" x2="{WIDTH - MARGIN_RIGHT}" '
               f'y2="{_fmt(x_axis_y)}" stroke="black"/>')
    out.append(f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" '
               f'y2="{_fmt(x_axis_y)}" stroke="black"/>')
    for t in nice_ticks(xmin, xmax):
        x = sx(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{_fmt(x_axis_y)}" x2="{_fmt(x)}" '
                   f'y2="{_fmt(x_axis_y + 4)}" stroke="black"/>')
        out.append(f'<text x="{_fmt(x)}" y="{_fmt(x_axis_y + 16)}" text-anchor="middle">'
                   f"{_label(t)}</text>")
    for t in nice_ticks(0.0, ymax / 1.08, target=5):
        y = sy(t)
        out.append(f'<line x1="{MARGIN_LEFT - 4}" y1="{_fmt(y)}" x2="{MARGIN_LEFT}" '
                   f'y2="{_fmt(y)}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_LEFT - 6}" y="{_fmt(y + 4)}" text-anchor="end">'
                   f"{_label(t)}</text>")
    if xlabel:
        out.append(f'<text x="{MARGIN_LEFT + pw / 2:.1f}" y="{HEIGHT - 8}" text-anchor="middle">'
                   f"{escape(xlabel)}</text>")
    if ylabel:
        out.append(f'<text x="14" y="{MARGIN_TOP + ph / 2:.1f}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {MARGIN_TOP + ph / 2:.1f})">{escape(ylabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
