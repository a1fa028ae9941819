"""Continuous piecewise-linear functions [0,1] -> [0,1] with rational nodes.

A ``Pwl1`` is the interpolant of its node list.  Any rational slopes are
allowed at construction time (case-ii boundary curves need that);
:meth:`validate` reports where the free-algebra conditions (integer slope
and intercept on every piece) fail.  MV operations are computed exactly on
a common refinement: merged breakpoints plus the points where the relevant
truncation or crossing switches pieces.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import InputError
from .geometry import CellComplex, ConvexCell
from .rationals import ONE, ZERO

Node = tuple[Fraction, Fraction]
Interval = tuple[Fraction, Fraction]


def _canonical_nodes(nodes: Iterable[Node]) -> tuple[Node, ...]:
    pts = [(Fraction(x), Fraction(y)) for x, y in nodes]
    if len(pts) < 2:
        raise InputError("need at least two nodes")
    xs = [p[0] for p in pts]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise InputError("node abscissae must be strictly increasing")
    if xs[0] != 0 or xs[-1] != 1:
        raise InputError("nodes must span [0, 1]")
    if any(not (0 <= p[1] <= 1) for p in pts):
        raise InputError("node values must lie in [0, 1]")
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        a, b, c = out[-1], pts[i], pts[i + 1]
        if (b[1] - a[1]) * (c[0] - b[0]) == (c[1] - b[1]) * (b[0] - a[0]):
            continue  # collinear: interior node is redundant
        out.append(b)
    out.append(pts[-1])
    return tuple(out)


@dataclass(frozen=True)
class Pwl1:
    nodes: tuple[Node, ...]

    @staticmethod
    def from_nodes(nodes: Iterable[Node]) -> "Pwl1":
        return Pwl1(_canonical_nodes(nodes))

    @staticmethod
    def constant(value) -> "Pwl1":
        v = Fraction(value)
        return Pwl1.from_nodes([(ZERO, v), (ONE, v)])

    @staticmethod
    def identity() -> "Pwl1":
        return Pwl1.from_nodes([(ZERO, ZERO), (ONE, ONE)])

    # -- basic queries ------------------------------------------------------

    def breakpoints(self) -> list[Fraction]:
        return [x for x, _ in self.nodes]

    def __call__(self, x) -> Fraction:
        return self.evaluate(x)

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        if not 0 <= x <= 1:
            raise InputError(f"argument {x} outside [0, 1]")
        xs = self.breakpoints()
        i = bisect_right(xs, x) - 1
        if i >= len(xs) - 1:
            i = len(xs) - 2
        (x0, y0), (x1, y1) = self.nodes[i], self.nodes[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def piece_slopes(self) -> list[Fraction]:
        return [(y1 - y0) / (x1 - x0)
                for (x0, y0), (x1, y1) in zip(self.nodes, self.nodes[1:])]

    def min_value(self) -> Fraction:
        return min(y for _, y in self.nodes)

    def max_value(self) -> Fraction:
        return max(y for _, y in self.nodes)

    def is_constant(self, value=None) -> bool:
        ys = {y for _, y in self.nodes}
        if len(ys) != 1:
            return False
        return value is None or ys == {Fraction(value)}

    def lipschitz_bound(self) -> Fraction:
        return max(abs(s) for s in self.piece_slopes())

    def validate(self) -> list[str]:
        """Free-algebra conditions: every piece has integer slope and
        integer intercept.  Range and continuity hold by construction."""
        out = []
        for (x0, y0), (x1, y1) in zip(self.nodes, self.nodes[1:]):
            slope = (y1 - y0) / (x1 - x0)
            intercept = y0 - slope * x0
            if slope.denominator != 1:
                out.append(f"piece [{x0}, {x1}]: slope {slope} not an integer")
            elif intercept.denominator != 1:
                out.append(f"piece [{x0}, {x1}]: intercept {intercept} not an integer")
        return out

    # -- refinement machinery -----------------------------------------------

    def _piece_at(self, x0: Fraction, x1: Fraction) -> tuple[Fraction, Fraction]:
        """(slope, intercept) of the piece covering [x0, x1] (a subinterval
        of one canonical piece)."""
        xs = self.breakpoints()
        i = bisect_right(xs, x0) - 1
        if i >= len(xs) - 1:
            i = len(xs) - 2
        (a, ya), (b, yb) = self.nodes[i], self.nodes[i + 1]
        slope = (yb - ya) / (b - a)
        return slope, ya - slope * a

    def level_crossings(self, other: "Pwl1", offset: Fraction) -> list[Fraction]:
        """Interior solutions of self(x) + other(x) = offset per refined piece."""
        xs = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        out = []
        for x0, x1 in zip(xs, xs[1:]):
            s1, c1 = self._piece_at(x0, x1)
            s2, c2 = other._piece_at(x0, x1)
            s, c = s1 + s2, c1 + c2 - offset
            if s != 0:
                r = -c / s
                if x0 < r < x1:
                    out.append(r)
        return out


def _pointwise(op: Callable[[Fraction, Fraction], Fraction], f: Pwl1, g: Pwl1,
               crossings: list[Fraction]) -> Pwl1:
    xs = sorted(set(f.breakpoints()) | set(g.breakpoints()) | set(crossings))
    return Pwl1.from_nodes([(x, op(f.evaluate(x), g.evaluate(x))) for x in xs])


def mv_neg(f: Pwl1) -> Pwl1:
    return Pwl1.from_nodes([(x, 1 - y) for x, y in f.nodes])


def mv_oplus(f: Pwl1, g: Pwl1) -> Pwl1:
    cross = f.level_crossings(g, ONE)
    return _pointwise(lambda a, b: min(ONE, a + b), f, g, cross)


def mv_otimes(f: Pwl1, g: Pwl1) -> Pwl1:
    cross = f.level_crossings(g, ONE)
    return _pointwise(lambda a, b: max(ZERO, a + b - 1), f, g, cross)


def mv_min(f: Pwl1, g: Pwl1) -> Pwl1:
    cross = f.level_crossings(mv_neg(g), ONE)  # f - g = 0
    return _pointwise(min, f, g, cross)


def mv_max(f: Pwl1, g: Pwl1) -> Pwl1:
    cross = f.level_crossings(mv_neg(g), ONE)
    return _pointwise(max, f, g, cross)


def chang_delta(f: Pwl1, g: Pwl1) -> Pwl1:
    """Pointwise Chang distance |f - g|."""
    cross = f.level_crossings(mv_neg(g), ONE)
    return _pointwise(lambda a, b: abs(a - b), f, g, cross)


def scalar_mul(f: Pwl1, n: int) -> Pwl1:
    """n-fold truncated sum: min(1, n*f)."""
    if n < 1:
        raise InputError("scalar multiplier must be >= 1")
    cross = []
    xs = f.breakpoints()
    for x0, x1 in zip(xs, xs[1:]):
        s, c = f._piece_at(x0, x1)
        s, c = n * s, n * c - 1
        if s != 0:
            r = -c / s
            if x0 < r < x1:
                cross.append(r)
    xs2 = sorted(set(xs) | set(cross))
    return Pwl1.from_nodes([(x, min(ONE, n * f.evaluate(x))) for x in xs2])


def compose(outer: Pwl1, inner: Pwl1) -> Pwl1:
    """Exact outer(inner(x)).  Breakpoints are inner's plus the preimages of
    outer's breakpoints under inner."""
    xs = set(inner.breakpoints())
    inner_xs = inner.breakpoints()
    targets = outer.breakpoints()[1:-1]
    for x0, x1 in zip(inner_xs, inner_xs[1:]):
        s, c = inner._piece_at(x0, x1)
        if s == 0:
            continue
        for b in targets:
            r = (b - c) / s
            if x0 < r < x1:
                xs.add(r)
    pts = sorted(xs)
    return Pwl1.from_nodes([(x, outer.evaluate(inner.evaluate(x))) for x in pts])


# -- level and zero sets ----------------------------------------------------

def level_intervals(f: Pwl1, value) -> list[Interval]:
    """{x : f(x) = value} as merged closed intervals (points are [x, x])."""
    v = Fraction(value)
    hits: list[Interval] = []
    for (x0, y0), (x1, y1) in zip(f.nodes, f.nodes[1:]):
        if y0 == v and y1 == v:
            hits.append((x0, x1))
        elif min(y0, y1) <= v <= max(y0, y1) and y0 != y1:
            r = x0 + (v - y0) * (x1 - x0) / (y1 - y0)
            hits.append((r, r))
    merged: list[list[Fraction]] = []
    for lo, hi in sorted(hits):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def zero_intervals(f: Pwl1) -> list[Interval]:
    return level_intervals(f, ZERO)


def intervals_to_complex(intervals: Iterable[Interval]) -> CellComplex:
    """Embed 1-D intervals at y = 0 so one complex type serves both arities."""
    cells = []
    for lo, hi in intervals:
        cells.append(ConvexCell.from_points([(lo, ZERO), (hi, ZERO)]))
    return CellComplex.build(cells)


def zero_set(f: Pwl1) -> CellComplex:
    return intervals_to_complex(zero_intervals(f))


def min_on_interval(f: Pwl1, lo, hi) -> Optional[Fraction]:
    """Exact minimum of f over [lo, hi] ∩ [0, 1], None when empty."""
    lo, hi = max(Fraction(lo), ZERO), min(Fraction(hi), ONE)
    if lo > hi:
        return None
    candidates = [f.evaluate(lo), f.evaluate(hi)]
    candidates += [y for x, y in f.nodes if lo <= x <= hi]
    return min(candidates)


def min_off_neighbourhood(f: Pwl1, centre, radius) -> Optional[Fraction]:
    """Minimum of f over [0,1] minus the open ball around centre."""
    centre, radius = Fraction(centre), Fraction(radius)
    vals = [v for v in (min_on_interval(f, ZERO, centre - radius),
                        min_on_interval(f, centre + radius, ONE)) if v is not None]
    return min(vals) if vals else None
