"""Deterministic SVG rendering of presentations and swept arc systems.

Two pictures: the level diagram of a plat word (strands, crossings with
the under-strand broken, twist regions as labelled boxes) and the chord
diagram of the upper arc system at a chosen level, with the lower shadow
arcs highlighted on the reference line.
"""

from __future__ import annotations

from fractions import Fraction

from .arcs import ChordDiagram, POS, NEG, sweep
from .presentation import BraidLetter, PlatPresentation, TwistRegion

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"]


def _fmt(x) -> str:
    return f"{float(x):.2f}"


def render_level_diagram(p: PlatPresentation, unit: int = 26) -> str:
    """SVG of the plat word: one row per event, caps top and bottom."""
    n2 = p.strand_count
    rows = len(p.events)
    width = (n2 + 1) * unit
    height = (rows + 3) * unit
    x = lambda pos: pos * unit
    y = lambda row: (row + 1.5) * unit

    from .presentation import component_of_strand, induced_permutation
    labels = component_of_strand(p)
    perm = induced_permutation(p)
    top_label = [labels[perm[i] - 1] for i in range(n2)]
    color_of = {}
    for lab in labels:
        if lab not in color_of:
            color_of[lab] = _PALETTE[len(color_of) % len(_PALETTE)]

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             '<g fill="none" stroke-width="2">']
    occupant = list(range(n2 + 1))

    def stroke(strand):
        return color_of[top_label[strand - 1]]

    for i in range(1, n2, 2):
        xa, xb = x(i), x(i + 1)
        ytop = y(0)
        parts.append(f'<path d="M {_fmt(xa)} {_fmt(ytop)} C {_fmt(xa)} '
                     f'{_fmt(ytop - unit)} {_fmt(xb)} {_fmt(ytop - unit)} '
                     f'{_fmt(xb)} {_fmt(ytop)}" stroke="{stroke(occupant[i])}"/>')
    for row, ev in enumerate(p.events):
        y0, y1 = y(row), y(row + 1)
        k = ev.pos
        for pos in range(1, n2 + 1):
            if pos in (k, k + 1):
                continue
            parts.append(f'<line x1="{_fmt(x(pos))}" y1="{_fmt(y0)}" '
                         f'x2="{_fmt(x(pos))}" y2="{_fmt(y1)}" '
                         f'stroke="{stroke(occupant[pos])}"/>')
        xa, xb = x(k), x(k + 1)
        sa, sb = occupant[k], occupant[k + 1]
        if isinstance(ev, TwistRegion):
            mid = (y0 + y1) / 2
            for xx, ss in ((xa, sa), (xb, sb)):
                parts.append(f'<line x1="{_fmt(xx)}" y1="{_fmt(y0)}" '
                             f'x2="{_fmt(xx)}" y2="{_fmt(y1)}" '
                             f'stroke="{stroke(ss)}"/>')
            parts.append(f'<rect x="{_fmt(xa - 6)}" y="{_fmt(mid - 8)}" '
                         f'width="{_fmt(xb - xa + 12)}" height="16" '
                         f'fill="white" stroke="black" stroke-width="1"/>')
            parts.append(f'<text x="{_fmt((xa + xb) / 2)}" y="{_fmt(mid + 4)}" '
                         f'fill="black" stroke="none" font-size="11" '
                         f'text-anchor="middle">{ev.half_twists}</text>')
        else:
            over_left = ev.sign > 0
            d_left = f'M {_fmt(xa)} {_fmt(y0)} L {_fmt(xb)} {_fmt(y1)}'
            d_right = f'M {_fmt(xb)} {_fmt(y0)} L {_fmt(xa)} {_fmt(y1)}'
            if over_left:
                under, under_s, over, over_s = d_right, sb, d_left, sa
            else:
                under, under_s, over, over_s = d_left, sa, d_right, sb
            parts.append(f'<path d="{under}" stroke="{stroke(under_s)}"/>')
            mx, my = (xa + xb) / 2, (y0 + y1) / 2
            parts.append(f'<circle cx="{_fmt(mx)}" cy="{_fmt(my)}" r="5" '
                         f'fill="white" stroke="none"/>')
            parts.append(f'<path d="{over}" stroke="{stroke(over_s)}"/>')
            occupant[k], occupant[k + 1] = sb, sa
    ybot = y(rows)
    for i in range(1, n2, 2):
        xa, xb = x(i), x(i + 1)
        parts.append(f'<path d="M {_fmt(xa)} {_fmt(ybot)} C {_fmt(xa)} '
                     f'{_fmt(ybot + unit)} {_fmt(xb)} {_fmt(ybot + unit)} '
                     f'{_fmt(xb)} {_fmt(ybot)}" stroke="{stroke(occupant[i])}"/>')
    parts.append('</g></svg>')
    return "\n".join(parts) + "\n"


def render_chord_diagram(p: PlatPresentation, level=0, unit: int = 14,
                         max_chords: int = 4000) -> str:
    """SVG of the upper system's chords at the given level.

    The reference loop is drawn as a line, punctures as dots, hemisphere +
    chords as arcs above and hemisphere - below; the lower shadow arcs
    (intervals 1, 3, 5, ...) are highlighted.
    """
    sys = sweep(p, level)
    diag = ChordDiagram(sys)
    total = diag.total_points
    width = (total + 3) * unit
    n = sys.n

    def px(rank):
        return (rank + 1.5) * unit

    base = 60 + total * unit / 4
    height = 2 * base
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
             f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
             f'<line x1="0" y1="{_fmt(base)}" x2="{_fmt(width)}" '
             f'y2="{_fmt(base)}" stroke="#999" stroke-width="1"/>']
    for i in range(1, n + 1):
        r1 = diag.puncture_rank(2 * i - 1)
        r2 = diag.puncture_rank(2 * i)
        parts.append(f'<line x1="{_fmt(px(r1))}" y1="{_fmt(base)}" '
                     f'x2="{_fmt(px(r2))}" y2="{_fmt(base)}" '
                     f'stroke="#bbb" stroke-width="6"/>')
    chords = []
    for hemi, sgn in ((POS, -1), (NEG, +1)):
        for c in diag.family(hemi):
            chords.append((c, sgn))
    drawn = chords[:max_chords]
    for c, sgn in drawn:
        lo, hi = c.span
        xa, xb = px(lo), px(hi)
        r = (xb - xa) / 2
        color = _PALETTE[(c.owner - 1) % len(_PALETTE)]
        ry = min(r, base - 10)
        parts.append(f'<path d="M {_fmt(xa)} {_fmt(base)} A {_fmt(r)} '
                     f'{_fmt(ry)} 0 0 {1 if sgn > 0 else 0} {_fmt(xb)} '
                     f'{_fmt(base)}" fill="none" stroke="{color}" '
                     f'stroke-width="0.7"/>')
    for j in range(1, 2 * n + 1):
        r = diag.puncture_rank(j)
        parts.append(f'<circle cx="{_fmt(px(r))}" cy="{_fmt(base)}" r="2.5" '
                     f'fill="black"/>')
        parts.append(f'<text x="{_fmt(px(r))}" y="{_fmt(base + 14)}" '
                     f'font-size="9" text-anchor="middle">{j}</text>')
    if len(chords) > len(drawn):
        parts.append(f'<text x="4" y="12" font-size="10">showing '
                     f'{len(drawn)} of {len(chords)} chords</text>')
    parts.append('</svg>')
    return "\n".join(parts) + "\n"
