"""Deterministic SVG emission.

Fixed canvas, exact-rational coordinates rendered at fixed decimal
precision through integer arithmetic, stable layer ids, everything sorted:
identical input yields byte-identical output.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .geometry import AffineForm2, CellComplex
from .pwl1 import Pwl1
from .pwl2 import Pwl2

SIZE = 560
MARGIN = 40
SPAN = SIZE - 2 * MARGIN

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
FILL_PALETTE = ("#aec7e8", "#ff9896", "#98df8a", "#c5b0d5", "#ffbb78")


def _fixed(value: Fraction, decimals: int = 2) -> str:
    """Exact decimal rounding (half away from zero), no floats."""
    scale = 10 ** decimals
    scaled = value * scale
    n, d = scaled.numerator, scaled.denominator
    q, r = divmod(abs(n), d)
    if 2 * r >= d:
        q += 1
    text = f"{q:0{decimals + 1}d}"
    sign = "-" if n < 0 and q > 0 else ""
    return f"{sign}{text[:-decimals]}.{text[-decimals:]}"


def _px(x: Fraction) -> str:
    return _fixed(MARGIN + x * SPAN)


def _py(y: Fraction) -> str:
    return _fixed(MARGIN + (1 - y) * SPAN)


def _header(lines: list[str]) -> None:
    lines.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" '
                 f'height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">')
    lines.append(f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>')


def _grid(lines: list[str], divisions: int = 4) -> None:
    lines.append('<g id="grid" stroke="#dddddd" stroke-width="1">')
    for k in range(divisions + 1):
        t = Fraction(k, divisions)
        lines.append(f'<line x1="{_px(t)}" y1="{_py(Fraction(0))}" '
                     f'x2="{_px(t)}" y2="{_py(Fraction(1))}"/>')
        lines.append(f'<line x1="{_px(Fraction(0))}" y1="{_py(t)}" '
                     f'x2="{_px(Fraction(1))}" y2="{_py(t)}"/>')
    lines.append("</g>")
    lines.append('<g id="frame" stroke="#000000" fill="none" stroke-width="1">')
    lines.append(f'<rect x="{_px(Fraction(0))}" y="{_py(Fraction(1))}" '
                 f'width="{_fixed(Fraction(SPAN))}" height="{_fixed(Fraction(SPAN))}"/>')
    lines.append("</g>")


def _value_color(v: Fraction) -> str:
    """Flat blue-to-red map of a value in [0, 1], exact integer channels."""
    v = min(max(v, Fraction(0)), Fraction(1))
    red = (255 * v.numerator) // v.denominator
    blue = 255 - red
    return f"rgb({red},64,{blue})"


def svg_functions_1d(functions: Sequence[tuple[Pwl1, str]]) -> str:
    """Graphs of one-variable functions, one polyline per function."""
    lines: list[str] = []
    _header(lines)
    _grid(lines)
    for idx, (fn, label) in enumerate(functions):
        color = PALETTE[idx % len(PALETTE)]
        pts = " ".join(f"{_px(x)},{_py(y)}" for x, y in fn.nodes)
        lines.append(f'<g id="graph-{idx}" stroke="{color}" fill="none" stroke-width="2">')
        lines.append(f'<polyline points="{pts}"/>')
        lines.append("</g>")
        lines.append(f'<g id="nodes-{idx}" fill="{color}">')
        for x, y in fn.nodes:
            lines.append(f'<circle cx="{_px(x)}" cy="{_py(y)}" r="3"/>')
        lines.append("</g>")
        lines.append(f'<text id="label-{idx}" x="{MARGIN + 8 + 90 * idx}" y="24" '
                     f'fill="{color}" font-size="14">{label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def svg_complex_layers(layers: Sequence[tuple[CellComplex, str]]) -> str:
    """Cell complexes as stacked layers: filled polygons, fat segments,
    dots for points."""
    lines: list[str] = []
    _header(lines)
    _grid(lines)
    for idx, (cplx, label) in enumerate(layers):
        stroke = PALETTE[idx % len(PALETTE)]
        fill = FILL_PALETTE[idx % len(FILL_PALETTE)]
        lines.append(f'<g id="layer-{idx}" stroke="{stroke}" fill="{fill}" '
                     f'fill-opacity="0.55" stroke-width="2">')
        for cell in cplx.cells:
            vs = cell.vertices
            if cell.kind == "polygon":
                pts = " ".join(f"{_px(x)},{_py(y)}" for x, y in vs)
                lines.append(f'<polygon points="{pts}"/>')
            elif cell.kind == "segment":
                (x0, y0), (x1, y1) = vs
                lines.append(f'<line x1="{_px(x0)}" y1="{_py(y0)}" '
                             f'x2="{_px(x1)}" y2="{_py(y1)}"/>')
            else:
                (x, y) = vs[0]
                lines.append(f'<circle cx="{_px(x)}" cy="{_py(y)}" r="4"/>')
        lines.append("</g>")
        lines.append(f'<text id="label-{idx}" x="{MARGIN + 8 + 150 * idx}" y="24" '
                     f'fill="{stroke}" font-size="14">{label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _form_label(f) -> str:
    parts = []
    if f.a:
        parts.append("x" if f.a == 1 else ("-x" if f.a == -1 else f"{f.a}x"))
    if f.b:
        sign = "+" if f.b > 0 and parts else ""
        parts.append(sign + ("y" if f.b == 1 else ("-y" if f.b == -1 else f"{f.b}y")))
    if f.c or not parts:
        sign = "+" if f.c > 0 and parts else ""
        parts.append(f"{sign}{f.c}")
    return "".join(parts)


def svg_function_2d(fn: Pwl2, label: str = "", annotate: bool = False) -> str:
    """Flat colour-per-triangle value map of a two-variable function; with
    annotate, each maximal region is tagged with its affine form."""
    lines: list[str] = []
    _header(lines)
    lines.append('<g id="tiles" stroke="#333333" stroke-width="0.5">')
    for cell, f in fn.tiles:
        mean = sum(f(v) for v in cell.vertices) / len(cell.vertices)
        pts = " ".join(f"{_px(x)},{_py(y)}" for x, y in cell.vertices)
        lines.append(f'<polygon points="{pts}" fill="{_value_color(mean)}"/>')
    lines.append("</g>")
    _grid(lines)
    if annotate:
        lines.append('<g id="plane-labels" font-size="11" fill="#000000">')
        # one label per form, placed at the barycenter of its largest tile
        best: dict[tuple, tuple] = {}
        for cell, f in fn.tiles:
            key = (f.a, f.b, f.c)
            if key not in best or cell.area2() > best[key][0]:
                best[key] = (cell.area2(), cell.barycenter())
        for key in sorted(best):
            _, (bx, by) = best[key]
            text = _form_label(AffineForm2(*key))
            lines.append(f'<text x="{_px(bx)}" y="{_py(by)}" '
                         f'text-anchor="middle">{text}</text>')
        lines.append("</g>")
    if label:
        lines.append(f'<text id="label" x="{MARGIN + 8}" y="24" '
                     f'fill="#000000" font-size="14">{label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
