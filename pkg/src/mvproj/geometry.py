"""Exact 2-D polyhedral primitives over the rationals.

Cells are closed convex sets of dimension 0, 1 or 2 (points, segments,
convex polygons); a ``CellComplex`` is a canonical finite union of cells.
Everything is immutable and every operation is a pure function on exact
``Fraction`` coordinates, so results are decided by equalities, never by
tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import InputError
from .rationals import ONE, ZERO

Point = tuple[Fraction, Fraction]


def pt(x, y) -> Point:
    return (Fraction(x), Fraction(y))


ORIGIN = pt(0, 0)


@dataclass(frozen=True)
class AffineForm2:
    """The affine function a*x + b*y + c."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __call__(self, p: Point) -> Fraction:
        return self.a * p[0] + self.b * p[1] + self.c

    def __neg__(self) -> "AffineForm2":
        return AffineForm2(-self.a, -self.b, -self.c)

    def __sub__(self, other: "AffineForm2") -> "AffineForm2":
        return AffineForm2(self.a - other.a, self.b - other.b, self.c - other.c)

    def __add__(self, other: "AffineForm2") -> "AffineForm2":
        return AffineForm2(self.a + other.a, self.b + other.b, self.c + other.c)

    def scale(self, k) -> "AffineForm2":
        k = Fraction(k)
        return AffineForm2(k * self.a, k * self.b, k * self.c)

    def shift(self, k) -> "AffineForm2":
        return AffineForm2(self.a, self.b, self.c + Fraction(k))

    @property
    def is_constant(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def has_integer_coefficients(self) -> bool:
        return (
            self.a.denominator == 1
            and self.b.denominator == 1
            and self.c.denominator == 1
        )


def form(a, b, c) -> AffineForm2:
    return AffineForm2(Fraction(a), Fraction(b), Fraction(c))


FORM_X = form(1, 0, 0)
FORM_Y = form(0, 1, 0)


def edge_form(p: Point, q: Point) -> AffineForm2:
    """Form vanishing on line pq and positive strictly left of p->q."""
    a = p[1] - q[1]
    b = q[0] - p[0]
    c = -(a * p[0] + b * p[1])
    return AffineForm2(a, b, c)


def line_key(f: AffineForm2) -> tuple[int, int, int]:
    """Canonical integer key identifying the zero line of a non-constant form."""
    if f.is_constant:
        raise InputError("constant form has no line")
    denom_lcm = 1
    for q in (f.a.denominator, f.b.denominator, f.c.denominator):
        denom_lcm = denom_lcm * q // gcd(denom_lcm, q)
    a = int(f.a * denom_lcm)
    b = int(f.b * denom_lcm)
    c = int(f.c * denom_lcm)
    g = gcd(gcd(abs(a), abs(b)), abs(c))
    a, b, c = a // g, b // g, c // g
    if a < 0 or (a == 0 and b < 0):
        a, b, c = -a, -b, -c
    return (a, b, c)


def line_intersection(f: AffineForm2, g: AffineForm2) -> Optional[Point]:
    """Intersection point of the zero lines of two forms, None when parallel."""
    det = f.a * g.b - g.a * f.b
    if det == 0:
        return None
    return ((f.b * g.c - f.c * g.b) / det, (f.c * g.a - f.a * g.c) / det)


def cross(o: Point, p: Point, q: Point) -> Fraction:
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def convex_hull(points: Sequence[Point]) -> list[Point]:
    """Andrew's monotone chain with strict turns (collinear points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


@dataclass(frozen=True)
class ConvexCell:
    """A closed convex cell: point (1 vertex), segment (2) or CCW polygon.

    Canonical form: polygon vertices counter-clockwise starting at the
    lexicographically least one, no three consecutive collinear; segment
    endpoints sorted; built through :meth:`from_points` so degenerate input
    normalizes downward in dimension.
    """

    vertices: tuple[Point, ...]

    @staticmethod
    def from_points(points: Iterable[Point]) -> Optional["ConvexCell"]:
        pts = [(Fraction(x), Fraction(y)) for (x, y) in points]
        if not pts:
            return None
        hull = convex_hull(pts)
        if len(hull) == 1:
            return ConvexCell((hull[0],))
        if len(hull) == 2:
            return ConvexCell(tuple(sorted(hull)))
        # monotone chain output is CCW and starts at the lex-least point
        return ConvexCell(tuple(hull))

    @property
    def kind(self) -> str:
        n = len(self.vertices)
        return "point" if n == 1 else "segment" if n == 2 else "polygon"

    @property
    def dim(self) -> int:
        return min(len(self.vertices) - 1, 2)

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def area2(self) -> Fraction:
        """Twice the signed area (0 for points/segments)."""
        vs = self.vertices
        if len(vs) < 3:
            return ZERO
        total = ZERO
        for i in range(len(vs)):
            p, q = vs[i], vs[(i + 1) % len(vs)]
            total += p[0] * q[1] - q[0] * p[1]
        return total

    def barycenter(self) -> Point:
        n = len(self.vertices)
        sx = sum(v[0] for v in self.vertices)
        sy = sum(v[1] for v in self.vertices)
        return (Fraction(sx, n), Fraction(sy, n))

    def halfplanes(self) -> list[AffineForm2]:
        """Forms f with cell = {p : f(p) >= 0 for all f}."""
        vs = self.vertices
        if len(vs) == 1:
            (x, y) = vs[0]
            return [form(1, 0, -x), form(-1, 0, x), form(0, 1, -y), form(0, -1, y)]
        if len(vs) == 2:
            p, q = vs
            f = edge_form(p, q)
            dx, dy = q[0] - p[0], q[1] - p[1]
            cap_p = AffineForm2(dx, dy, -(dx * p[0] + dy * p[1]))
            cap_q = AffineForm2(-dx, -dy, dx * q[0] + dy * q[1])
            return [f, -f, cap_p, cap_q]
        return [edge_form(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def contains_point(self, p: Point) -> bool:
        return all(f(p) >= 0 for f in self.halfplanes())

    def fan_triangles(self) -> list["ConvexCell"]:
        """Deterministic fan triangulation from the first (lex-least) vertex."""
        vs = self.vertices
        if len(vs) <= 3:
            return [self]
        out = []
        for i in range(1, len(vs) - 1):
            tri = ConvexCell.from_points([vs[0], vs[i], vs[i + 1]])
            if tri is not None and tri.kind == "polygon":
                out.append(tri)
        return out


def sort_key(cell: ConvexCell):
    return (cell.dim, len(cell.vertices), cell.vertices)


def cell_clip(cell: ConvexCell, halfplane: AffineForm2) -> Optional[ConvexCell]:
    """cell ∩ {halfplane >= 0}, or None when empty."""
    vs = cell.vertices
    vals = [halfplane(v) for v in vs]
    if all(v >= 0 for v in vals):
        return cell
    if all(v <= 0 for v in vals):
        on = [v for v, val in zip(vs, vals) if val == 0]
        return ConvexCell.from_points(on) if on else None
    kept = [v for v, val in zip(vs, vals) if val >= 0]
    edges = [(0, 1)] if len(vs) == 2 else [(i, (i + 1) % len(vs)) for i in range(len(vs))]
    for i, j in edges:
        a, b = vals[i], vals[j]
        if (a > 0 > b) or (a < 0 < b):
            t = a / (a - b)
            p, q = vs[i], vs[j]
            kept.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return ConvexCell.from_points(kept)


def clip_many(cell: ConvexCell, halfplanes: Iterable[AffineForm2]) -> Optional[ConvexCell]:
    out: Optional[ConvexCell] = cell
    for f in halfplanes:
        if out is None:
            return None
        out = cell_clip(out, f)
    return out


def cell_intersection(a: ConvexCell, b: ConvexCell) -> Optional[ConvexCell]:
    ax0, ay0, ax1, ay1 = a.bbox()
    bx0, by0, bx1, by1 = b.bbox()
    if ax1 < bx0 or bx1 < ax0 or ay1 < by0 or by1 < ay0:
        return None
    return clip_many(a, b.halfplanes())


def cells_intersect(a: ConvexCell, b: ConvexCell) -> bool:
    return cell_intersection(a, b) is not None


def cell_contains_cell(outer: ConvexCell, inner: ConvexCell) -> bool:
    return all(outer.contains_point(v) for v in inner.vertices)


def affine_image(cell: ConvexCell, fx: AffineForm2, fy: AffineForm2) -> ConvexCell:
    """Exact image under p -> (fx(p), fy(p)); the image of a convex cell is
    the convex hull of its mapped vertices."""
    mapped = [(fx(v), fy(v)) for v in cell.vertices]
    out = ConvexCell.from_points(mapped)
    assert out is not None
    return out


def split_cells_by_line(cells: Iterable[ConvexCell], f: AffineForm2,
                        polygons_only: bool = True) -> list[ConvexCell]:
    out: list[ConvexCell] = []
    for cell in cells:
        vals = [f(v) for v in cell.vertices]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            out.append(cell)
            continue
        for part in (cell_clip(cell, f), cell_clip(cell, -f)):
            if part is None:
                continue
            if polygons_only and part.kind != "polygon":
                continue
            out.append(part)
    return out


def split_cells_by_lines(cells: Iterable[ConvexCell], forms: Iterable[AffineForm2],
                         polygons_only: bool = True) -> list[ConvexCell]:
    """Refine cells by a set of lines; with polygons_only the result is the
    set of 2-D arrangement faces inside the given cells."""
    seen: set[tuple[int, int, int]] = set()
    unique: list[AffineForm2] = []
    for f in forms:
        if f.is_constant:
            continue
        key = line_key(f)
        if key not in seen:
            seen.add(key)
            unique.append(AffineForm2(Fraction(key[0]), Fraction(key[1]), Fraction(key[2])))
    unique.sort(key=line_key)
    current = list(cells)
    for f in unique:
        current = split_cells_by_line(current, f, polygons_only=polygons_only)
    return sorted(current, key=sort_key)


UNIT_SQUARE = ConvexCell.from_points([pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])


# ---------------------------------------------------------------------------
# segment bookkeeping

def _segment_param(seg: ConvexCell, p: Point) -> Fraction:
    a, b = seg.vertices
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx != 0:
        return (p[0] - a[0]) / dx
    return (p[1] - a[1]) / dy


def _segment_point(seg: ConvexCell, t: Fraction) -> Point:
    a, b = seg.vertices
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def merge_intervals(intervals: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Merge closed intervals, joining the ones that touch."""
    merged: list[list[Fraction]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def _merge_collinear_segments(segments: list[ConvexCell]) -> list[ConvexCell]:
    by_line: dict[tuple[int, int, int], list[ConvexCell]] = {}
    for seg in segments:
        key = line_key(edge_form(*seg.vertices))
        by_line.setdefault(key, []).append(seg)
    out: list[ConvexCell] = []
    for key in sorted(by_line):
        group = by_line[key]
        ref = min(group, key=sort_key)
        intervals = []
        for seg in group:
            t0 = _segment_param(ref, seg.vertices[0])
            t1 = _segment_param(ref, seg.vertices[1])
            intervals.append((min(t0, t1), max(t0, t1)))
        for lo, hi in merge_intervals(intervals):
            cell = ConvexCell.from_points([_segment_point(ref, lo), _segment_point(ref, hi)])
            if cell is not None:
                out.append(cell)
    return out


# ---------------------------------------------------------------------------
# complexes

@dataclass(frozen=True)
class CellComplex:
    """Canonical finite union of convex cells.

    Canonical form: no cell contained in another, collinear segments merged,
    polygons with overlapping interiors re-tiled into interior-disjoint
    faces, deterministic ordering.  Equality of complexes *as point sets* is
    :func:`complexes_equal`, not structural equality.
    """

    cells: tuple[ConvexCell, ...]

    @staticmethod
    def empty() -> "CellComplex":
        return CellComplex(())

    @staticmethod
    def build(cells: Iterable[Optional[ConvexCell]]) -> "CellComplex":
        polys: list[ConvexCell] = []
        segs: list[ConvexCell] = []
        points: list[ConvexCell] = []
        for cell in cells:
            if cell is None:
                continue
            norm = ConvexCell.from_points(cell.vertices)
            if norm is None:
                continue
            (points if norm.kind == "point" else segs if norm.kind == "segment" else polys).append(norm)

        polys = _canonical_polygons(polys)
        segs = _merge_collinear_segments(sorted(set(segs), key=sort_key))
        segs = [s for s in segs if not any(cell_contains_cell(p, s) for p in polys)]
        points = sorted(set(points), key=sort_key)
        keep_points = []
        for cell in points:
            others = polys + segs
            if not any(o.contains_point(cell.vertices[0]) for o in others):
                keep_points.append(cell)
        return CellComplex(tuple(sorted(polys + segs + keep_points, key=sort_key)))

    @property
    def is_empty(self) -> bool:
        return not self.cells

    def polygons(self) -> list[ConvexCell]:
        return [c for c in self.cells if c.kind == "polygon"]

    def contains_point(self, p: Point) -> bool:
        return any(c.contains_point(p) for c in self.cells)


def _canonical_polygons(polys: list[ConvexCell]) -> list[ConvexCell]:
    polys = sorted(set(polys), key=sort_key)
    # drop polygons contained in another
    polys = [a for i, a in enumerate(polys)
             if not any(i != j and cell_contains_cell(b, a) for j, b in enumerate(polys))]
    # detect interior overlaps; re-tile each overlapping group by its lines
    n = len(polys)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    any_overlap = False
    for i in range(n):
        for j in range(i + 1, n):
            inter = cell_intersection(polys[i], polys[j])
            if inter is not None and inter.kind == "polygon":
                any_overlap = True
                parent[find(i)] = find(j)
    if not any_overlap:
        return polys
    groups: dict[int, list[ConvexCell]] = {}
    for i, cell in enumerate(polys):
        groups.setdefault(find(i), []).append(cell)
    out: list[ConvexCell] = []
    for root in sorted(groups):
        group = groups[root]
        if len(group) == 1:
            out.append(group[0])
            continue
        lines = [edge_form(c.vertices[k], c.vertices[(k + 1) % len(c.vertices)])
                 for c in group for k in range(len(c.vertices))]
        faces: set[ConvexCell] = set()
        for cell in group:
            faces.update(split_cells_by_lines([cell], lines))
        out.extend(sorted(faces, key=sort_key))
    return sorted(out, key=sort_key)


def complex_union(a: CellComplex, b: CellComplex) -> CellComplex:
    return CellComplex.build(list(a.cells) + list(b.cells))


def complex_intersection(a: CellComplex, b: CellComplex) -> CellComplex:
    out = []
    for ca in a.cells:
        for cb in b.cells:
            out.append(cell_intersection(ca, cb))
    return CellComplex.build(out)


def _segment_residue(seg: ConvexCell, outer: CellComplex) -> list[tuple[Fraction, Fraction]]:
    """Parameter gaps of seg not covered by outer (each of positive length)."""
    covered: list[tuple[Fraction, Fraction]] = []
    for cell in outer.cells:
        inter = cell_intersection(cell, seg)
        if inter is None or inter.kind == "polygon":
            continue
        if inter.kind == "point":
            t = _segment_param(seg, inter.vertices[0])
            covered.append((t, t))
        else:
            t0 = _segment_param(seg, inter.vertices[0])
            t1 = _segment_param(seg, inter.vertices[1])
            covered.append((min(t0, t1), max(t0, t1)))
    merged = merge_intervals(covered)
    gaps: list[tuple[Fraction, Fraction]] = []
    cursor = ZERO
    for lo, hi in merged:
        if lo > cursor:
            gaps.append((cursor, lo))
        cursor = max(cursor, hi)
        if cursor >= 1:
            break
    if cursor < 1:
        gaps.append((cursor, ONE))
    return [(lo, hi) for lo, hi in gaps if hi > lo]


def complex_contains(outer: CellComplex, inner: CellComplex) -> tuple[bool, Optional[Point]]:
    """Whether every point of inner lies in outer; on failure also returns a
    witness point of inner outside outer (exact)."""
    outer_cells = set(outer.cells)
    outer_polys = outer.polygons()
    for cell in inner.cells:
        if cell in outer_cells:
            continue
        if cell.kind == "point":
            p = cell.vertices[0]
            if not outer.contains_point(p):
                return False, p
        elif cell.kind == "segment":
            gaps = _segment_residue(cell, outer)
            if gaps:
                lo, hi = gaps[0]
                return False, _segment_point(cell, (lo + hi) / 2)
        else:
            if any(cell_contains_cell(p, cell) for p in outer_polys):
                continue
            lines = []
            for oc in outer.cells:
                if oc.kind == "point":
                    continue
                vs = oc.vertices
                edges = [(0, 1)] if len(vs) == 2 else [(i, (i + 1) % len(vs)) for i in range(len(vs))]
                lines.extend(edge_form(vs[i], vs[j]) for i, j in edges)
            faces = split_cells_by_lines([cell], lines)
            for face in faces:
                q = face.barycenter()
                if not any(p.contains_point(q) for p in outer_polys):
                    return False, q
    return True, None


def complexes_equal(a: CellComplex, b: CellComplex) -> bool:
    """Point-set equality."""
    return complex_contains(a, b)[0] and complex_contains(b, a)[0]


def is_connected(c: CellComplex) -> bool:
    """True when the union of cells is topologically connected (sharing even
    a single point links two cells)."""
    n = len(c.cells)
    if n <= 1:
        return True
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and cells_intersect(c.cells[i], c.cells[j]):
                parent[find(i)] = find(j)
    return len({find(i) for i in range(n)}) == 1
