"""Minimal deterministic SVG renderers for patterns and CDFs.

Hand-rolled on purpose: report bundles must be byte-identical across runs,
so every coordinate and color is formatted with fixed precision and no
timestamps, random ids, or library version strings are emitted.
"""

from __future__ import annotations

import numpy as np

from .coverage import WeightedCDF
from .grid import FLOOR_DB, Pattern

# Anchor colors approximating the familiar dark-blue-to-yellow ramp.
_RAMP = (
    (0.267, 0.005, 0.329), (0.275, 0.195, 0.496), (0.230, 0.322, 0.546),
    (0.173, 0.438, 0.558), (0.128, 0.567, 0.551), (0.158, 0.684, 0.502),
    (0.369, 0.789, 0.383), (0.678, 0.864, 0.190), (0.993, 0.906, 0.144),
)

_CURVE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                 "#8c564b")

_INVALID_FILL = "#d9d9d9"
_FONT = 'font-family="DejaVu Sans, sans-serif"'


def _f(x: float) -> str:
    return f"{x:.2f}"


def _ramp_color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    pos = t * (len(_RAMP) - 1)
    i = min(int(pos), len(_RAMP) - 2)
    frac = pos - i
    rgb = [(1 - frac) * a + frac * b for a, b in zip(_RAMP[i], _RAMP[i + 1])]
    return "#" + "".join(f"{int(round(255 * c)):02x}" for c in rgb)


def _svg_open(width: float, height: float, title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
        f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">',
        f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" '
        'fill="#ffffff"/>',
        f'<text x="{_f(width / 2)}" y="20" {_FONT} font-size="14" '
        f'text-anchor="middle">{title}</text>',
    ]


def heatmap_svg(pattern: Pattern, title: str, span_db: float = 40.0) -> str:
    """Azimuth-elevation heatmap of a pattern, invalid points in gray."""
    grid = pattern.grid
    n_t, n_p = grid.shape
    cell = max(720.0 / n_p, 4.0)
    ml, mt, mr, mb = 60.0, 36.0, 86.0, 48.0
    plot_w, plot_h = n_p * cell, n_t * cell
    width, height = ml + plot_w + mr, mt + plot_h + mb
    vmax = pattern.max_value()
    finite = pattern.values[grid.valid]
    vmin = max(float(np.nanmin(finite)), vmax - span_db)
    out = _svg_open(width, height, title)
    for it in range(n_t):
        for ip in range(n_p):
            x, y = ml + ip * cell, mt + it * cell
            if not grid.valid[it, ip]:
                fill = _INVALID_FILL
            else:
                v = pattern.values[it, ip]
                t = (v - vmin) / (vmax - vmin) if vmax > vmin else 1.0
                fill = _ramp_color(t)
            out.append(f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(cell)}" '
                       f'height="{_f(cell)}" fill="{fill}"/>')
    out.append(f'<rect x="{_f(ml)}" y="{_f(mt)}" width="{_f(plot_w)}" '
               f'height="{_f(plot_h)}" fill="none" stroke="#000000"/>')
    # axis ticks: phi every 60 deg, theta every 30 deg
    phi0 = grid.phi[0] - grid.phi_step / 2.0
    phi_span = n_p * grid.phi_step
    for tick in range(0, 361, 60):
        if not phi0 <= tick <= phi0 + phi_span:
            continue
        x = ml + (tick - phi0) / phi_span * plot_w
        out.append(f'<line x1="{_f(x)}" y1="{_f(mt + plot_h)}" x2="{_f(x)}" '
                   f'y2="{_f(mt + plot_h + 5)}" stroke="#000000"/>')
        out.append(f'<text x="{_f(x)}" y="{_f(mt + plot_h + 18)}" {_FONT} '
                   f'font-size="11" text-anchor="middle">{tick}</text>')
    th0 = grid.theta[0] - grid.theta_step / 2.0
    th_span = n_t * grid.theta_step
    for tick in range(0, 181, 30):
        if not th0 <= tick <= th0 + th_span:
            continue
        y = mt + (tick - th0) / th_span * plot_h
        out.append(f'<line x1="{_f(ml - 5)}" y1="{_f(y)}" x2="{_f(ml)}" '
                   f'y2="{_f(y)}" stroke="#000000"/>')
        out.append(f'<text x="{_f(ml - 8)}" y="{_f(y + 4)}" {_FONT} '
                   f'font-size="11" text-anchor="end">{tick}</text>')
    out.append(f'<text x="{_f(ml + plot_w / 2)}" y="{_f(height - 12)}" '
               f'{_FONT} font-size="12" text-anchor="middle">'
               'azimuth phi (deg)</text>')
    out.append(f'<text x="14" y="{_f(mt + plot_h / 2)}" {_FONT} '
               f'font-size="12" text-anchor="middle" transform="rotate(-90 '
               f'14 {_f(mt + plot_h / 2)})">elevation theta (deg)</text>')
    # colorbar
    cb_x, cb_w, n_seg = ml + plot_w + 18, 14.0, 64
    seg_h = plot_h / n_seg
    for s in range(n_seg):
        t = 1.0 - (s + 0.5) / n_seg
        y = mt + s * seg_h
        out.append(f'<rect x="{_f(cb_x)}" y="{_f(y)}" width="{_f(cb_w)}" '
                   f'height="{_f(seg_h + 0.5)}" fill="{_ramp_color(t)}"/>')
    out.append(f'<rect x="{_f(cb_x)}" y="{_f(mt)}" width="{_f(cb_w)}" '
               f'height="{_f(plot_h)}" fill="none" stroke="#000000"/>')
    for frac, val in ((0.0, vmax), (0.5, (vmax + vmin) / 2), (1.0, vmin)):
        y = mt + frac * plot_h
        out.append(f'<text x="{_f(cb_x + cb_w + 4)}" y="{_f(y + 4)}" {_FONT} '
                   f'font-size="11">{val:.1f}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _thin_steps(cdf: WeightedCDF) -> list[tuple[float, float]]:
    """Step-curve vertices, decimated for plot size but deterministic."""
    pts = []
    last_x, last_y = None, 0.0
    values, cums = cdf.values, cdf.cum_weights
    for i in range(values.size):
        x, y = float(values[i]), float(cums[i])
        if last_x is not None and x - last_x < 0.05 and y - last_y < 0.002 \
                and i < values.size - 1:
            continue
        pts.append((x, last_y))
        pts.append((x, y))
        last_x, last_y = x, y
    return pts


def _x_range(curves) -> tuple[float, float]:
    los, his = [], []
    for _, cdf in curves:
        vis = cdf.values[cdf.values > FLOOR_DB + 1.0]
        los.append(float(vis.min()) if vis.size else float(cdf.values.min()))
        his.append(float(cdf.values.max()))
    lo, hi = min(los), max(his)
    lo = 5.0 * np.floor(lo / 5.0)
    hi = 5.0 * np.ceil(hi / 5.0)
    return (lo, hi if hi > lo else lo + 5.0)


def cdf_svg(curves, title: str, xlabel: str, gaussian=None) -> str:
    """Weighted CDF step curves; optionally one dashed Gaussian overlay.

    ``curves`` is a list of (label, WeightedCDF). The Gaussian, if given,
    is labeled with its mu and sigma.
    """
    ml, mt, mr, mb = 62.0, 36.0, 20.0, 50.0
    plot_w, plot_h = 560.0, 340.0
    width, height = ml + plot_w + mr, mt + plot_h + mb
    xlo, xhi = _x_range(curves)

    def sx(x: float) -> float:
        return ml + (x - xlo) / (xhi - xlo) * plot_w

    def sy(y: float) -> float:
        return mt + (1.0 - y) * plot_h

    out = _svg_open(width, height, title)
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = sy(frac)
        out.append(f'<line x1="{_f(ml)}" y1="{_f(y)}" x2="{_f(ml + plot_w)}" '
                   f'y2="{_f(y)}" stroke="#cccccc"/>')
        out.append(f'<text x="{_f(ml - 6)}" y="{_f(y + 4)}" {_FONT} '
                   f'font-size="11" text-anchor="end">{frac:g}</text>')
    x_step = 5.0 if xhi - xlo <= 60 else 10.0
    tick = xlo
    while tick <= xhi + 1e-9:
        x = sx(tick)
        out.append(f'<line x1="{_f(x)}" y1="{_f(mt + plot_h)}" x2="{_f(x)}" '
                   f'y2="{_f(mt + plot_h + 5)}" stroke="#000000"/>')
        out.append(f'<text x="{_f(x)}" y="{_f(mt + plot_h + 18)}" {_FONT} '
                   f'font-size="11" text-anchor="middle">{tick:g}</text>')
        tick += x_step
    for idx, (label, cdf) in enumerate(curves):
        color = _CURVE_COLORS[idx % len(_CURVE_COLORS)]
        pts = [(max(min(x, xhi), xlo), y) for x, y in _thin_steps(cdf)]
        path = " ".join(f"{_f(sx(x))},{_f(sy(y))}" for x, y in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                   'stroke-width="1.5"/>')
        ly = mt + 16 + 16 * idx
        out.append(f'<line x1="{_f(ml + 10)}" y1="{_f(ly - 4)}" '
                   f'x2="{_f(ml + 34)}" y2="{_f(ly - 4)}" stroke="{color}" '
                   'stroke-width="1.5"/>')
        out.append(f'<text x="{_f(ml + 40)}" y="{_f(ly)}" {_FONT} '
                   f'font-size="11">{label}</text>')
    if gaussian is not None:
        xs = np.linspace(xlo, xhi, 201)
        ys = gaussian.cdf(xs)
        path = " ".join(f"{_f(sx(float(x)))},{_f(sy(float(y)))}"
                        for x, y in zip(xs, ys))
        out.append(f'<polyline points="{path}" fill="none" stroke="#000000" '
                   'stroke-width="1.2" stroke-dasharray="6 3"/>')
        ly = mt + 16 + 16 * len(curves)
        out.append(f'<line x1="{_f(ml + 10)}" y1="{_f(ly - 4)}" '
                   f'x2="{_f(ml + 34)}" y2="{_f(ly - 4)}" stroke="#000000" '
                   'stroke-width="1.2" stroke-dasharray="6 3"/>')
        out.append(f'<text x="{_f(ml + 40)}" y="{_f(ly)}" {_FONT} '
                   f'font-size="11">gaussian fit (mu={gaussian.mu:.1f}, '
                   f'sigma={gaussian.sigma:.1f})</text>')
    out.append(f'<rect x="{_f(ml)}" y="{_f(mt)}" width="{_f(plot_w)}" '
               f'height="{_f(plot_h)}" fill="none" stroke="#000000"/>')
    out.append(f'<text x="{_f(ml + plot_w / 2)}" y="{_f(height - 12)}" '
               f'{_FONT} font-size="12" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="14" y="{_f(mt + plot_h / 2)}" {_FONT} '
               f'font-size="12" text-anchor="middle" transform="rotate(-90 '
               f'14 {_f(mt + plot_h / 2)})">cumulative probability</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
