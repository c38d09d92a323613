"""Deterministic SVG schematics of level-2 apartments and enclosures.

The drawings are byte-stable: coordinates are exact rationals formatted
to two decimals, no library renderer is involved, and element order is
fixed.  Components that differ by an omega_2 translation have no faithful
real embedding, so they are drawn as shaded disks at schematic positions
(one disk per coroot-lattice translate), with the real plane inside each.
"""

from __future__ import annotations

from fractions import Fraction

from .apartment import Apartment, Point, point_from_rationals
from .errors import UnsupportedType
from .lexring import LinLex, Q
from .rootsystem import root_datum

SQRT3 = Q(433, 250)  # drawing-only approximation


def _fmt(x) -> str:
    q = Q(x)
    scaled = q * 100
    whole = scaled.numerator // scaled.denominator
    return f"{whole / 100:.2f}"


class _Svg:
    def __init__(self, width: int, height: int):
        self.parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
        ]

    def line(self, x1, y1, x2, y2, dashed=False, color="black", width=1.5):
        dash = ' stroke-dasharray="6,5"' if dashed else ""
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{width}"{dash}/>'
        )

    def circle(self, cx, cy, r, fill="#d3d3d3", stroke="none", opacity=None):
        op = f' fill-opacity="{opacity}"' if opacity is not None else ""
        self.parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" '
            f'fill="{fill}" stroke="{stroke}"{op}/>'
        )

    def dot(self, cx, cy, r=3):
        self.circle(cx, cy, r, fill="black")

    def text(self, x, y, s, size=14, anchor="middle", style="italic"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'text-anchor="{anchor}" font-style="{style}" '
            f'font-family="serif">{s}</text>'
        )

    def arrow(self, x1, y1, x2, y2, label=None, lx=None, ly=None):
        self.line(x1, y1, x2, y2, width=2)
        # fixed-size arrowhead along the segment direction
        dx, dy = Q(x2) - Q(x1), Q(y2) - Q(y1)
        norm = max(abs(dx), abs(dy)) or Q(1)
        ux, uy = dx / norm, dy / norm
        self.parts.append(
            f'<path d="M {_fmt(Q(x2))} {_fmt(Q(y2))} '
            f'L {_fmt(Q(x2) - 8 * ux + 4 * uy)} {_fmt(Q(y2) - 8 * uy - 4 * ux)} '
            f'L {_fmt(Q(x2) - 8 * ux - 4 * uy)} {_fmt(Q(y2) - 8 * uy + 4 * ux)} Z" '
            f'fill="black"/>'
        )
        if label:
            self.text(lx if lx is not None else x2, ly if ly is not None else y2, label)

    def curve_arrow(self, x1, y1, x2, y2, label, ly):
        mid = (Q(x1) + Q(x2)) / 2
        self.parts.append(
            f'<path d="M {_fmt(x1)} {_fmt(y1)} Q {_fmt(mid)} {_fmt(Q(y1) + 14)} '
            f'{_fmt(x2)} {_fmt(y2)}" stroke="black" fill="none" stroke-width="1.2"/>'
        )
        self.text(mid, ly, label)

    def finish(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def render_apartment(phi: str) -> str:
    tag = phi.upper()
    if tag == "A1":
        return _render_a1()
    if tag == "A2":
        return _render_rank2(tag)
    if tag == "B2":
        return _render_rank2(tag)
    raise UnsupportedType(f"cannot render apartment of type {phi!r}")


def _render_a1() -> str:
    svg = _Svg(640, 200)
    y = 90
    # component at 0: solid segment with marked vertices 0 and 1
    svg.line(40, y, 250, y)
    svg.line(250, y, 330, y, dashed=True)
    svg.line(330, y, 600, y)
    svg.dot(100, y)
    svg.text(100, y - 12, "0")
    svg.dot(160, y)
    svg.text(160, y - 12, "1")
    # next component: translate by 2*omega_2 (the displayed decomposition)
    svg.dot(440, y)
    svg.text(440, y - 12, "2&#969;&#8322;")
    for x in (100, 160, 440):
        svg.line(x, y - 28, x, y + 28, dashed=True, width=0.8)
    svg.curve_arrow(70, y + 34, 130, y + 34, "s", y + 62)
    svg.curve_arrow(130, y + 34, 190, y + 34, "w&#8321;", y + 62)
    svg.curve_arrow(410, y + 34, 470, y + 34, "w&#8322;", y + 62)
    return svg.finish()


_RANK2_LAYOUT = {
    "A2": {
        "cells": [(0, 0), (1, 0), (-1, 0), (0, 1), (-1, 1), (0, -1), (1, -1)],
        "basis": ((Q(2), Q(0)), (Q(1), SQRT3)),
        "arrows": [
            ((Q(2), Q(0)), "a&#969;&#8322;"),
            ((Q(-1), SQRT3), "b&#969;&#8322;"),
            ((Q(1), SQRT3), "(a+b)&#969;&#8322;"),
        ],
        "wall": True,
    },
    "B2": {
        "cells": [
            (0, 0), (1, 0), (-1, 0), (0, 1), (0, -1),
            (1, 1), (-1, 1), (1, -1), (-1, -1),
        ],
        "basis": ((Q(2), Q(0)), (Q(0), Q(2))),
        "arrows": [
            ((Q(2), Q(0)), "a&#969;&#8322;"),
            ((Q(-2), Q(2)), "b&#969;&#8322;"),
            ((Q(0), Q(2)), "(a+b)&#969;&#8322;"),
            ((Q(2), Q(2)), "(2a+b)&#969;&#8322;"),
        ],
        "wall": False,
    },
}


def _rank2_to_screen(v, scale=60, cx=320, cy=230):
    return cx + scale * v[0], cy - scale * v[1]


def _render_rank2(tag: str) -> str:
    lay = _RANK2_LAYOUT[tag]
    svg = _Svg(640, 460)
    e1, e2 = lay["basis"]
    for m, k in lay["cells"]:
        v = (m * e1[0] + k * e2[0], m * e1[1] + k * e2[1])
        x, y = _rank2_to_screen(v)
        svg.circle(x, y, 36)
    ox, oy = _rank2_to_screen((Q(0), Q(0)))
    for vec, label in lay["arrows"]:
        x, y = _rank2_to_screen(vec)
        lx = x + (18 if x >= ox else -18)
        ly = y + (-10 if y <= oy else 20)
        svg.arrow(ox, oy, x, y, label, lx, ly)
    if lay["wall"]:
        wx, wy1 = _rank2_to_screen((Q(1), Q(6, 5)))
        _, wy2 = _rank2_to_screen((Q(1), Q(-6, 5)))
        svg.line(wx, wy1, wx, wy2, width=1.2)
        svg.text(wx + 44, (wy1 + wy2) / 2, "H&#8342;,&#969;&#8322;", size=12)
    return svg.finish()


def default_enclosure_pair(phi: str) -> tuple[Point, Point]:
    """The two marked points of the standard A2 enclosure example."""
    if phi.upper() != "A2":
        raise UnsupportedType("the enclosure figure is drawn in the A2 apartment")
    x = point_from_rationals(2, [0, 0], j2=[Q(-3, 2), Q(-3, 2)])
    y = point_from_rationals(2, [0, 0], j2=[1, Q(1, 2)])
    return x, y


def render_enclosure(phi: str, x: Point | None = None, y: Point | None = None) -> str:
    """Shade the components meeting cl({x, y}), classified exactly.

    Each disk is a coroot-lattice omega_2 translate; the shading fraction
    is the proportion of a fixed real-offset sample grid inside the
    enclosure, so interior components fill solid and boundary components
    fill partially.
    """
    tag = phi.upper()
    if tag != "A2":
        raise UnsupportedType("the enclosure figure is drawn in the A2 apartment")
    datum = root_datum(tag)
    apt = Apartment(datum, 2)
    if x is None or y is None:
        x, y = default_enclosure_pair(tag)
    omega = [x, y]

    av = datum.coroot((1, 0))
    bv = datum.coroot((0, 1))
    # lattice coordinates of the higher parts, to bound the drawing window
    cells = []
    cx = apt._coroot_coords_rat(x.level_component(2))
    cy = apt._coroot_coords_rat(y.level_component(2))
    m_lo = int(min(cx[0], cy[0])) - 1
    m_hi = int(max(cx[0], cy[0])) + 1
    k_lo = int(min(cx[1], cy[1])) - 1
    k_hi = int(max(cx[1], cy[1])) + 1
    offsets = [
        (Q(dx, 2), Q(dy, 2)) for dx in range(-2, 3) for dy in range(-2, 3)
    ]
    for m in range(m_lo, m_hi + 1):
        for k in range(k_lo, k_hi + 1):
            base = point_from_rationals(
                2,
                [0, 0],
                j2=[m * av[0] + k * bv[0], m * av[1] + k * bv[1]],
            )
            inside = 0
            for ox, oy in offsets:
                probe = base + point_from_rationals(2, [ox, oy])
                if apt.enclosure_contains(omega, probe):
                    inside += 1
            cells.append((m, k, Fraction(inside, len(offsets))))

    svg = _Svg(780, 640)
    e1 = (Q(1), Q(0))
    e2 = (Q(-1, 2), SQRT3 / 2)

    def screen(m, k):
        v = (2 * (m * e1[0] + k * e2[0]), 2 * (m * e1[1] + k * e2[1]))
        span_m = max(1, m_hi - m_lo)
        span_k = max(1, k_hi - k_lo)
        scale = min(Q(340, span_m + span_k), Q(70))
        return (
            390 + scale * (v[0] - (m_lo + m_hi) * 1 + (k_lo + k_hi) * Q(1, 2)),
            320 - scale * (v[1] - (k_lo + k_hi) * SQRT3 / 2),
        )

    for m, k, frac in cells:
        sx, sy = screen(m, k)
        if frac > 0:
            svg.circle(sx, sy, 26, fill="#9aa7e0", opacity=_fmt(Q(1, 4) + frac * Q(3, 4)))
        else:
            svg.circle(sx, sy, 26, fill="#e8e8e8")
    for pt, name in ((x, "x"), (y, "y")):
        cc = apt._coroot_coords_rat(pt.level_component(2))
        sx, sy = screen(cc[0], cc[1])
        svg.dot(sx, sy)
        svg.text(sx + 14, sy - 8, name)
    return svg.finish()
