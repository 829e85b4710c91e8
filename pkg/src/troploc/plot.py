"""SVG pictures of point configurations in the 2-dimensional torus (n = 3).

A class x is drawn at (x1 - x3, x2 - x3). Output is plain text and
byte-for-byte reproducible for a given seed.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .core import as_cloud, as_point, max_hull_sample

COLORS = {
    "center": "#d62728",
    "median": "#1f77b4",
    "fw-sym": "#2ca02c",
    "fw-simplex": "#17becf",
    "frechet": "#ff7f0e",
    "hyperplane-l1": "#8c564b",
    "hyperplane-linf": "#e377c2",
    "set-sites": "#7f7f7f",
}


def chart(points):
    p = np.atleast_2d(np.asarray(points, dtype=float))
    return np.stack([p[:, 0] - p[:, 2], p[:, 1] - p[:, 2]], axis=1)


def max_segment(a, b):
    """Vertices of the max-tropical segment from ``b`` to ``a`` (a polyline)."""
    a, b = as_point(a), as_point(b)
    breaks = np.sort(b - a)
    pts = [b] + [np.maximum(a + t, b) for t in breaks] + [a + breaks[-1] + 1.0]
    pts = [p - p.min() for p in pts]
    out = [pts[0]]
    for p in pts[1:]:
        if np.ptp(p - out[-1]) > 1e-12:
            out.append(p)
    return np.array(out)


def _fmt(v):
    return f"{v:.3f}"


def render_svg(points, optima=None, seed: int = 0, samples: int = 1500, size: int = 480) -> str:
    """SVG with sampled hull region, pairwise tropical segments, sites and optima.

    ``optima`` maps a label to a point; points sharing a location get
    stacked labels so coincidences stay visible.
    """
    v = as_cloud(points)
    if v.shape[1] != 3:
        raise ValueError("plotting is defined only for n=3")
    optima = optima or {}
    rng = np.random.default_rng(seed)
    spread = max(float(np.ptp(v)), 1.0)
    coeffs = rng.uniform(-spread, spread, size=(samples, v.shape[0]))
    cloud = chart(max_hull_sample(v, coeffs)) if v.shape[0] > 1 else chart(v)
    segs = [chart(max_segment(v[i], v[j])) for i, j in combinations(range(v.shape[0]), 2)]
    opt_xy = {k: chart(as_point(p))[0] for k, p in optima.items()}

    allxy = np.vstack([cloud, chart(v)] + segs + [np.array(list(opt_xy.values())).reshape(-1, 2)])
    lo, hi = allxy.min(axis=0), allxy.max(axis=0)
    pad = 0.15 * max(float((hi - lo).max()), 1.0)
    lo, hi = lo - pad, hi + pad
    scale = (size - 40) / float((hi - lo).max())

    def xy(p):
        return 20 + (p[0] - lo[0]) * scale, size - 20 - (p[1] - lo[1]) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        '<g id="hull-samples" fill="#cccccc">',
    ]
    for p in cloud:
        x, y = xy(p)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="1.2"/>')
    out.append("</g>")
    out.append('<g id="hull-segments" stroke="black" stroke-width="1.5" fill="none">')
    for s in segs:
        coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (xy(p) for p in s))
        out.append(f'<polyline points="{coords}"/>')
    out.append("</g>")
    out.append('<g id="sites" fill="purple">')
    for p in chart(v):
        x, y = xy(p)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4"/>')
    out.append("</g>")
    out.append('<g id="optima" font-family="sans-serif" font-size="11">')
    seen = {}
    for label, p in opt_xy.items():
        x, y = xy(p)
        key = (round(x, 3), round(y, 3))
        stack = seen.get(key, 0)
        seen[key] = stack + 1
        color = COLORS.get(label, "black")
        out.append(
            f'<path class="optimum" data-method="{label}" d="M{_fmt(x - 5)},{_fmt(y - 5)}L{_fmt(x + 5)},{_fmt(y + 5)}'
            f'M{_fmt(x - 5)},{_fmt(y + 5)}L{_fmt(x + 5)},{_fmt(y - 5)}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{_fmt(x + 7)}" y="{_fmt(y - 7 - 12 * stack)}" fill="{color}">{label}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
