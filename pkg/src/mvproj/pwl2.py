"""Piecewise-linear functions on the unit square, one affine form per tile.

A ``Pwl2`` carries a list of (triangle, affine form) tiles whose union is
the square with pairwise disjoint interiors.  As in the 1-D layer, rational
coefficients are accepted at construction and :meth:`validate` reports where
the free-algebra conditions fail.  Binary operations run on the common
refinement of the two tilings and split each refined piece along the single
line where the operation changes linear regime.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InputError
from .geometry import (
    AffineForm2,
    CellComplex,
    ConvexCell,
    Point,
    cell_clip,
    cell_intersection,
    form,
    sort_key,
)
from .pwl1 import Pwl1
from .rationals import ONE, ZERO

Tile = tuple[ConvexCell, AffineForm2]

_SQUARE_TRIS = (
    ConvexCell.from_points([(ZERO, ZERO), (ONE, ZERO), (ONE, ONE)]),
    ConvexCell.from_points([(ZERO, ZERO), (ONE, ONE), (ZERO, ONE)]),
)


def _tile_key(tile: Tile):
    cell, f = tile
    return (sort_key(cell), f.a, f.b, f.c)


@dataclass(frozen=True)
class Pwl2:
    tiles: tuple[Tile, ...]

    @staticmethod
    def from_tiles(tiles: Iterable[Tile], merge: bool = True) -> "Pwl2":
        flat: list[Tile] = []
        for cell, f in tiles:
            if cell is None or cell.kind != "polygon":
                continue
            for tri in cell.fan_triangles():
                flat.append((tri, f))
        if not flat:
            raise InputError("function needs at least one tile")
        if merge:
            flat = _merge_tiles(flat)
        return Pwl2(tuple(sorted(flat, key=_tile_key)))

    @staticmethod
    def constant(value) -> "Pwl2":
        v = Fraction(value)
        return Pwl2.from_tiles([(t, form(0, 0, v)) for t in _SQUARE_TRIS])

    @staticmethod
    def coordinate(index: int) -> "Pwl2":
        if index not in (1, 2):
            raise InputError("coordinate index must be 1 or 2")
        f = form(1, 0, 0) if index == 1 else form(0, 1, 0)
        return Pwl2.from_tiles([(t, f) for t in _SQUARE_TRIS])

    # -- queries -------------------------------------------------------------

    def evaluate(self, p: Point) -> Fraction:
        p = (Fraction(p[0]), Fraction(p[1]))
        if not (0 <= p[0] <= 1 and 0 <= p[1] <= 1):
            raise InputError(f"point {p} outside the unit square")
        for cell, f in self.tiles:
            if cell.contains_point(p):
                return f(p)
        raise InputError(f"no tile contains {p}; tiling is broken")

    def __call__(self, p: Point) -> Fraction:
        return self.evaluate(p)

    def min_value(self) -> Fraction:
        return min(f(v) for cell, f in self.tiles for v in cell.vertices)

    def max_value(self) -> Fraction:
        return max(f(v) for cell, f in self.tiles for v in cell.vertices)

    def is_constant(self, value=None) -> bool:
        vals = {f(v) for cell, f in self.tiles for v in cell.vertices}
        if len(vals) != 1:
            return False
        return value is None or vals == {Fraction(value)}

    def lipschitz_bound(self) -> Fraction:
        return max(abs(f.a) + abs(f.b) for _, f in self.tiles)

    def zero_set(self) -> CellComplex:
        return self.level_set(ZERO)

    def level_set(self, value) -> CellComplex:
        v = Fraction(value)
        cells = []
        for cell, f in self.tiles:
            g = f.shift(-v)
            if g.is_zero:
                cells.append(cell)
                continue
            part = cell_clip(cell, g)
            if part is not None:
                part = cell_clip(part, -g)
            if part is not None:
                cells.append(part)
        return CellComplex.build(cells)

    def validate(self) -> list[str]:
        """Violations of the free-algebra conditions: integer coefficients,
        values in [0,1], exact tiling of the square, continuity across
        every shared edge."""
        out = []
        for cell, f in self.tiles:
            if not f.has_integer_coefficients():
                out.append(f"tile {cell.vertices}: coefficients ({f.a}, {f.b}, {f.c}) not integers")
            for v in cell.vertices:
                if not 0 <= f(v) <= 1:
                    out.append(f"tile {cell.vertices}: value {f(v)} at {v} outside [0, 1]")
                if not (0 <= v[0] <= 1 and 0 <= v[1] <= 1):
                    out.append(f"tile {cell.vertices}: vertex {v} outside the square")
        area2 = sum(cell.area2() for cell, _ in self.tiles)
        if area2 != 2:
            out.append(f"tiles cover area {area2}/2, not the unit square")
        n = len(self.tiles)
        boxes = [cell.bbox() for cell, _ in self.tiles]
        for i in range(n):
            ci, fi = self.tiles[i]
            for j in range(i + 1, n):
                cj, fj = self.tiles[j]
                bi, bj = boxes[i], boxes[j]
                if bi[2] < bj[0] or bj[2] < bi[0] or bi[3] < bj[1] or bj[3] < bi[1]:
                    continue
                inter = cell_intersection(ci, cj)
                if inter is None:
                    continue
                if inter.kind == "polygon":
                    out.append(f"tiles {i} and {j} overlap with positive area")
                elif fi is not fj:
                    for v in inter.vertices:
                        if fi(v) != fj(v):
                            out.append(
                                f"discontinuity across edge {inter.vertices}: "
                                f"{fi(v)} vs {fj(v)} at {v}")
                            break
        return out

    # -- point-free equality --------------------------------------------------

    def equal_fn(self, other: "Pwl2") -> bool:
        """Exact function equality via the common refinement."""
        for piece, f, g in common_refinement(self, other):
            if any(f(v) != g(v) for v in piece.vertices):
                return False
        return True


def _merge_tiles(tiles: list[Tile]) -> list[Tile]:
    """Deterministic greedy coalescing of same-form neighbours whose union is
    convex; shrinks tile counts after overlays.  Result is fan-triangulated."""
    cells = sorted(tiles, key=_tile_key)
    changed = True
    while changed:
        changed = False
        edge_index: dict[tuple[Point, Point], list[int]] = {}
        for idx, (cell, _) in enumerate(cells):
            vs = cell.vertices
            for k in range(len(vs)):
                a, b = vs[k], vs[(k + 1) % len(vs)]
                edge_index.setdefault(tuple(sorted((a, b))), []).append(idx)
        dead: set[int] = set()
        for edge in sorted(edge_index):
            owners = [i for i in edge_index[edge] if i not in dead]
            if len(owners) != 2:
                continue
            i, j = owners
            (ci, fi), (cj, fj) = cells[i], cells[j]
            if (fi.a, fi.b, fi.c) != (fj.a, fj.b, fj.c):
                continue
            union = ConvexCell.from_points(list(ci.vertices) + list(cj.vertices))
            if union is None or union.area2() != ci.area2() + cj.area2():
                continue
            cells[i] = (union, fi)
            dead.add(j)
            changed = True
        if changed:
            cells = sorted((c for k, c in enumerate(cells) if k not in dead), key=_tile_key)
    out: list[Tile] = []
    for cell, f in cells:
        for tri in cell.fan_triangles():
            out.append((tri, f))
    return out


def common_refinement(F: Pwl2, G: Pwl2) -> list[tuple[ConvexCell, AffineForm2, AffineForm2]]:
    """Polygonal pieces covering the square on which both functions are affine."""
    out = []
    g_boxes = [(cell.bbox(), cell, f) for cell, f in G.tiles]
    for cf, ff in F.tiles:
        b = cf.bbox()
        for (bg, cg, fg) in g_boxes:
            if b[2] < bg[0] or bg[2] < b[0] or b[3] < bg[1] or bg[3] < b[1]:
                continue
            piece = cell_intersection(cf, cg)
            if piece is not None and piece.kind == "polygon":
                out.append((piece, ff, fg))
    return out


def _split_piece(piece: ConvexCell, switch: AffineForm2) -> list[tuple[ConvexCell, int]]:
    """Split a piece by the sign of switch; returns (part, sign) with sign
    +1 where switch >= 0 and -1 where switch <= 0."""
    if switch.is_constant:
        sign = 1 if switch.c >= 0 else -1
        return [(piece, sign)]
    out = []
    pos = cell_clip(piece, switch)
    if pos is not None and pos.kind == "polygon":
        out.append((pos, 1))
    neg = cell_clip(piece, -switch)
    if neg is not None and neg.kind == "polygon":
        out.append((neg, -1))
    if not out:
        out.append((piece, 1 if switch(piece.barycenter()) >= 0 else -1))
    return out


def _binary(Fn: Pwl2, Gn: Pwl2, kind: str) -> Pwl2:
    tiles: list[Tile] = []
    for piece, f, g in common_refinement(Fn, Gn):
        if kind in ("min", "max", "delta"):
            switch = f - g
        else:  # oplus / otimes switch at f + g = 1
            switch = (f + g).shift(-1)
        for part, sign in _split_piece(piece, switch):
            if kind == "min":
                h = g if sign > 0 else f
            elif kind == "max":
                h = f if sign > 0 else g
            elif kind == "delta":
                h = f - g if sign > 0 else g - f
            elif kind == "oplus":
                h = form(0, 0, 1) if sign > 0 else f + g
            else:  # otimes
                h = (f + g).shift(-1) if sign > 0 else form(0, 0, 0)
            tiles.append((part, h))
    return Pwl2.from_tiles(tiles)


def mv_neg(F: Pwl2) -> Pwl2:
    return Pwl2.from_tiles([(cell, AffineForm2(-f.a, -f.b, 1 - f.c)) for cell, f in F.tiles])


def mv_oplus(F: Pwl2, G: Pwl2) -> Pwl2:
    return _binary(F, G, "oplus")


def mv_otimes(F: Pwl2, G: Pwl2) -> Pwl2:
    return _binary(F, G, "otimes")


def mv_min(F: Pwl2, G: Pwl2) -> Pwl2:
    return _binary(F, G, "min")


def mv_max(F: Pwl2, G: Pwl2) -> Pwl2:
    return _binary(F, G, "max")


def chang_delta(F: Pwl2, G: Pwl2) -> Pwl2:
    """Pointwise Chang distance |F - G|."""
    return _binary(F, G, "delta")


def scalar_mul(F: Pwl2, n: int) -> Pwl2:
    """n-fold truncated sum min(1, n*F)."""
    if n < 1:
        raise InputError("scalar multiplier must be >= 1")
    tiles: list[Tile] = []
    for cell, f in F.tiles:
        switch = f.scale(n).shift(-1)  # n*f - 1
        for part, sign in _split_piece(cell, switch):
            tiles.append((part, form(0, 0, 1) if sign > 0 else f.scale(n)))
    return Pwl2.from_tiles(tiles)


def compose_after(outer: Pwl1, inner: Pwl2) -> Pwl2:
    """outer(inner(x, y)) as an exact tile list: each tile of inner is split
    along the level lines of inner at outer's breakpoints."""
    bps = outer.breakpoints()
    tiles: list[Tile] = []
    for cell, f in inner.tiles:
        if f.is_constant:
            tiles.append((cell, form(0, 0, outer.evaluate(f.c))))
            continue
        vals = [f(v) for v in cell.vertices]
        lo, hi = min(vals), max(vals)
        parts = [cell]
        for b in bps[1:-1]:
            if lo < b < hi:
                parts = [q for p in parts for q, _ in _split_piece(p, f.shift(-b))]
        for part in parts:
            pv = [f(v) for v in part.vertices]
            plo, phi = min(pv), max(pv)
            i = bisect_right(bps, (plo + phi) / 2) - 1
            i = min(max(i, 0), len(bps) - 2)
            (x0, y0), (x1, y1) = outer.nodes[i], outer.nodes[i + 1]
            slope = (y1 - y0) / (x1 - x0)
            intercept = y0 - slope * x0
            tiles.append((part, f.scale(slope).shift(intercept)))
    return Pwl2.from_tiles(tiles)
