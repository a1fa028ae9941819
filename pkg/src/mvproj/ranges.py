"""Ranges of pairs of one-variable functions and the range-equality
isomorphism test.

The range of (f, g) is the broken line traced by t -> (f(t), g(t)).  Its
node list (the extremals) is read off at the merged breakpoints of the two
canonical functions; consecutive duplicates and straight-through nodes
(same direction of travel on both sides) are dropped, so the list contains
exactly the geometric corners and reversal points, in traversal order.

Equal ranges imply isomorphic generated algebras; unequal ranges are
reported as such with no converse claim.
"""
from __future__ import annotations

from dataclasses import dataclass
from .errors import InputError
from .geometry import CellComplex, ConvexCell, Point, complexes_equal
from .pwl1 import Pwl1


@dataclass(frozen=True)
class ExtremalsList:
    points: tuple[Point, ...]


def _require_normalized(*fns: Pwl1) -> None:
    for f in fns:
        if f.nodes[0][1] != 0:
            raise InputError("pair members must vanish at 0")


def extremals(f: Pwl1, g: Pwl1) -> ExtremalsList:
    _require_normalized(f, g)
    params = sorted(set(f.breakpoints()) | set(g.breakpoints()))
    raw = [(f.evaluate(a), g.evaluate(a)) for a in params]
    pts: list[Point] = [raw[0]]
    for p in raw[1:]:
        if p != pts[-1]:
            pts.append(p)
    # drop straight-through nodes: direction after is a positive multiple of
    # the direction before (a speed change only, not a corner)
    out: list[Point] = [pts[0]]
    for i in range(1, len(pts) - 1):
        a, b, c = out[-1], pts[i], pts[i + 1]
        u = (b[0] - a[0], b[1] - a[1])
        v = (c[0] - b[0], c[1] - b[1])
        if u[0] * v[1] == u[1] * v[0] and u[0] * v[0] + u[1] * v[1] > 0:
            continue
        out.append(b)
    out.append(pts[-1])
    if len(out) >= 2 and out[-1] == out[-2]:
        out.pop()
    return ExtremalsList(tuple(out))


def pair_range(f: Pwl1, g: Pwl1) -> CellComplex:
    """The range of (f, g) as a canonical complex (point set, order lost)."""
    pts = extremals(f, g).points
    if len(pts) == 1:
        return CellComplex.build([ConvexCell.from_points([pts[0]])])
    cells = [ConvexCell.from_points([a, b]) for a, b in zip(pts, pts[1:])]
    return CellComplex.build(cells)


def iso_by_range(f: Pwl1, g: Pwl1, f1: Pwl1, g1: Pwl1) -> bool:
    """True when the two ranges coincide as point sets, which is sufficient
    for the generated algebras to be isomorphic.  A False result only means
    the ranges differ; no conclusion about non-isomorphism is drawn."""
    return complexes_equal(pair_range(f, g), pair_range(f1, g1))
