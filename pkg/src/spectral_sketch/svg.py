"""Minimal SVG rendering of spectral CDFs (no plotting dependency)."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .spectrum import SpectralDistribution

WIDTH, HEIGHT, MARGIN = 640, 400, 50
COLORS = ("#1f4fd1", "#d12a1f")


def _cdf_points(d: SpectralDistribution, x0: float, x1: float):
    """Vertices of the CDF staircase; one vertical jump per atom."""
    pts = [(x0, 0.0)]
    level = 0.0
    for x, w in zip(d.support, d.masses):
        pts.append((float(x), level))
        level += float(w)
        pts.append((float(x), level))
    pts.append((x1, level))
    return pts


def cdf_svg(curves: list[tuple[str, SpectralDistribution]],
            lo: float = 0.0, hi: float = 2.0) -> str:
    """SVG with one ``<polyline>`` per ``(label, distribution)``."""
    lo = min([lo] + [float(d.support[0]) for _, d in curves if len(d)])
    hi = max([hi] + [float(d.support[-1]) for _, d in curves if len(d)])
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(x):
        return MARGIN + (x - lo) / (hi - lo) * pw

    def sy(y):
        return HEIGHT - MARGIN - y * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
           f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<line x1="{MARGIN}" y1="{sy(0)}" x2="{WIDTH - MARGIN}" y2="{sy(0)}" '
           'stroke="black"/>',
           f'<line x1="{MARGIN}" y1="{sy(0)}" x2="{MARGIN}" y2="{sy(1)}" '
           'stroke="black"/>',
           f'<text x="{MARGIN}" y="{HEIGHT - 15}" font-size="12">{lo:g}</text>',
           f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - 15}" font-size="12" '
           f'text-anchor="end">{hi:g}</text>',
           f'<text x="{MARGIN - 8}" y="{sy(1) + 4}" font-size="12" '
           'text-anchor="end">1</text>']
    for i, (label, d) in enumerate(curves):
        pts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in _cdf_points(d, lo, hi))
        color = COLORS[i % len(COLORS)]
        out.append(f'<polyline class="cdf" data-label="{escape(label)}" '
                   f'fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 14 * (i + 1)}" '
                   f'font-size="12" fill="{color}" text-anchor="end">'
                   f'{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
