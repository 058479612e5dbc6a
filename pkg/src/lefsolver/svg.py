"""Static SVG 1.1 line charts (polylines with axis ticks)."""

from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
W, H = 640, 400
ML, MR, MT, MB = 70, 150, 40, 50


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    step = 10.0 ** np.floor(np.log10((hi - lo) / n))
    for m in (1, 2, 5, 10):
        if (hi - lo) / (m * step) <= n:
            step *= m
            break
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


def _fmt(x):
    return "%.4g" % x


def line_chart(series, title="", xlabel="", ylabel="", logy=False, x0=0, y0=0,
               width=W, height=H):
    """SVG group for ``series`` = [(label, x, y), ...]; returns (markup, width, height)."""
    pw, ph = width - ML - MR, height - MT - MB
    xs, ys = [], []
    clean = []
    for label, x, y in series:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ok = np.isfinite(x) & np.isfinite(y)
        if logy:
            ok &= y > 0
            y = np.where(ok, np.log10(np.where(y > 0, y, 1.0)), np.nan)
        clean.append((label, x[ok], y[ok]))
        xs.append(x[ok])
        ys.append(y[ok])
    allx = np.concatenate(xs) if xs else np.zeros(1)
    ally = np.concatenate(ys) if ys else np.zeros(1)
    if allx.size == 0:
        allx, ally = np.zeros(1), np.zeros(1)
    xlo, xhi = float(allx.min()), float(allx.max())
    ylo, yhi = float(ally.min()), float(ally.max())
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0

    def px(x):
        return x0 + ML + (x - xlo) / (xhi - xlo) * pw

    def py(y):
        return y0 + MT + ph - (y - ylo) / (yhi - ylo) * ph

    out = [f'<rect x="{x0 + ML}" y="{y0 + MT}" width="{pw}" height="{ph}" '
           'fill="none" stroke="#000"/>']
    for t in _ticks(xlo, xhi):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{y0 + MT + ph}" x2="{X:.2f}" '
                   f'y2="{y0 + MT + ph + 5}" stroke="#000"/>')
        out.append(f'<text x="{X:.2f}" y="{y0 + MT + ph + 18}" font-size="11" '
                   f'text-anchor="middle">{_fmt(t)}</text>')
    for t in _ticks(ylo, yhi):
        Y = py(t)
        lab = ("1e%d" % round(t)) if logy and abs(t - round(t)) < 1e-9 else (
            _fmt(10 ** t) if logy else _fmt(t))
        out.append(f'<line x1="{x0 + ML - 5}" y1="{Y:.2f}" x2="{x0 + ML}" y2="{Y:.2f}" '
                   'stroke="#000"/>')
        out.append(f'<text x="{x0 + ML - 8}" y="{Y + 4:.2f}" font-size="11" '
                   f'text-anchor="end">{lab}</text>')
    for k, (label, x, y) in enumerate(clean):
        col = COLORS[k % len(COLORS)]
        if x.size:
            pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
            out.append(f'<polyline points="{pts}" fill="none" stroke="{col}" '
                       'stroke-width="1.5"/>')
        ly = y0 + MT + 14 + 18 * k
        lx = x0 + ML + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{col}" '
                   'stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    out.append(f'<text x="{x0 + width / 2:.1f}" y="{y0 + 22}" font-size="14" '
               f'text-anchor="middle">{escape(title)}</text>')
    out.append(f'<text x="{x0 + ML + pw / 2:.1f}" y="{y0 + height - 8}" font-size="12" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="{x0 + 16}" y="{y0 + MT + ph / 2:.1f}" font-size="12" '
               f'text-anchor="middle" transform="rotate(-90 {x0 + 16} '
               f'{y0 + MT + ph / 2:.1f})">{escape(ylabel)}</text>')
    return "\n".join(out), width, height


def document(panels):
    """Stack chart groups vertically into one SVG document."""
    width = max(p[1] for p in panels)
    height = sum(p[2] for p in panels)
    body = []
    y = 0
    for markup, w, h in panels:
        body.append(f'<g transform="translate(0,{y})">\n{markup}\n</g>')
        y += h
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">\n'
            '<rect width="100%" height="100%" fill="#fff"/>\n'
            + "\n".join(body) + "\n</svg>\n")


def write_svg(path, panels):
    from pathlib import Path

    Path(path).write_text(document(panels))
