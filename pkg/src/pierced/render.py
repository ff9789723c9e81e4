"""SVG drawing of planar realizations."""

from __future__ import annotations

from pierced.geometry import Realization

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"]


class UnsupportedDimension(ValueError):
    pass


def render_svg(r: Realization, size: int = 600) -> str:
    """One labeled circle per ball, y axis pointing up."""
    if r.dim != 2:
        raise UnsupportedDimension(f"can only draw planar realizations, got dimension {r.dim}")
    if not r.balls:
        lo_x = lo_y = -1.0
        hi_x = hi_y = 1.0
    else:
        lo_x = min(b.center[0] - b.radius for b in r.balls)
        hi_x = max(b.center[0] + b.radius for b in r.balls)
        lo_y = min(b.center[1] - b.radius for b in r.balls)
        hi_y = max(b.center[1] + b.radius for b in r.balls)
    span = max(hi_x - lo_x, hi_y - lo_y)
    pad = 0.05 * span
    scale = size / (span + 2 * pad)

    def sx(x: float) -> float:
        return (x - lo_x + pad) * scale

    def sy(y: float) -> float:
        return (hi_y - y + pad) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for i, b in enumerate(r.balls):
        color = PALETTE[i % len(PALETTE)]
        cx, cy, rr = sx(b.center[0]), sy(b.center[1]), b.radius * scale
        out.append(
            f'<circle id="U{i + 1}" cx="{cx:.4f}" cy="{cy:.4f}" r="{rr:.4f}" '
            f'fill="{color}" fill-opacity="0.12" stroke="{color}" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{cx:.4f}" y="{cy - rr - 2:.4f}" font-family="sans-serif" font-size="12" '
            f'text-anchor="middle" fill="{color}">{i + 1}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
