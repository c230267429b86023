"""Polar SVG plot of rotation and reflection score tables."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .symmetry import SymmetryReport

SIZE = 420
RADIUS = 160.0

HEADER = """<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">
<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>
"""


def _xy(angle_deg, r, scale):
    c = SIZE / 2.0
    t = math.radians(angle_deg)
    rr = RADIUS * r / scale
    return c + rr * math.cos(t), c - rr * math.sin(t)


def _points(pairs, scale):
    return " ".join("%.3f,%.3f" % _xy(a, s, scale) for a, s in pairs)


def polar_svg(report: SymmetryReport, title: str = "") -> str:
    """Two closed series: rotations at their angle, reflection lines at both ends."""
    top = report.max_score
    scale = 1.2 * top if top > 0 else 1.0
    c = SIZE / 2.0
    out = [HEADER.format(size=SIZE)]
    for frac in (0.25, 0.5, 0.75, 1.0):
        out.append(f'<circle cx="{c}" cy="{c}" r="{RADIUS * frac:.3f}" fill="none" '
                   f'stroke="#dddddd" stroke-width="1"/>\n')
    for a in range(0, 360, 30):
        x, y = _xy(a, scale, scale)
        out.append(f'<line x1="{c}" y1="{c}" x2="{x:.3f}" y2="{y:.3f}" stroke="#eeeeee"/>\n')
    out.append(f'<circle class="threshold" cx="{c}" cy="{c}" r="{RADIUS * report.threshold / scale:.3f}" '
               'fill="none" stroke="#888888" stroke-dasharray="6,4"/>\n')

    rot = report.rotation.entries()
    ref = sorted(report.reflection.entries() + [((a + 180.0) % 360.0, s) for a, s in report.reflection.entries()])
    out.append(f'<polygon class="series" id="rotation" fill="none" stroke="#1f77b4" stroke-width="1.5" '
               f'points="{_points(rot, scale)}"/>\n')
    out.append(f'<polygon class="series" id="reflection" fill="none" stroke="#ff7f0e" stroke-width="1.5" '
               f'points="{_points(ref, scale)}"/>\n')

    out.append(f'<text x="10" y="20" font-family="sans-serif" font-size="13">{escape(title)}</text>\n')
    out.append('<text x="10" y="{y}" font-family="sans-serif" font-size="11" fill="#1f77b4">rotation</text>\n'
               .format(y=SIZE - 28))
    out.append('<text x="10" y="{y}" font-family="sans-serif" font-size="11" fill="#ff7f0e">reflection</text>\n'
               .format(y=SIZE - 12))
    out.append(f'<text x="{SIZE - 150}" y="{SIZE - 12}" font-family="sans-serif" font-size="11">'
               f'outer ring = {scale:.4g}</text>\n')
    out.append("</svg>\n")
    return "".join(out)
