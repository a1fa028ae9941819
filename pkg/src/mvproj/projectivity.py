"""Equalizer computation and the retraction test for substitution pairs.

A substitution pair (d1, d2) of valid two-variable functions with
d1(0,0) = d2(0,0) = 0 presents an endomorphism of the free two-generator
algebra.  Its equalizer K is the exact fixed-point locus {d1 = x, d2 = y}.
The pair presents a retraction (and hence its generated subalgebra is
projective) iff every value of (d1, d2) over the square is already attained
over K; that universal condition is decided exactly by image containment.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InputError, InternalCheckError
from .geometry import (
    AffineForm2,
    CellComplex,
    ConvexCell,
    FORM_X,
    FORM_Y,
    Point,
    cell_intersection,
    complex_contains,
    complex_intersection,
    is_connected,
    merge_intervals,
)
from .pwl1 import Pwl1
from .pwl2 import Pwl2, common_refinement, compose_after
from .rationals import ONE, ZERO, is_prime
from .terms import compile_term, point_zero_term

ORIGIN: Point = (ZERO, ZERO)


@dataclass(frozen=True)
class SubstitutionPair:
    d1: Pwl2
    d2: Pwl2

    def __post_init__(self):
        problems = self.d1.validate() + self.d2.validate()
        if problems:
            raise InputError("invalid substitution pair: " + "; ".join(problems[:3]))
        if self.d1.evaluate(ORIGIN) != 0 or self.d2.evaluate(ORIGIN) != 0:
            raise InputError("substitution pair must vanish at the origin")

    @staticmethod
    def identity() -> "SubstitutionPair":
        return SubstitutionPair(Pwl2.coordinate(1), Pwl2.coordinate(2))


@dataclass(frozen=True)
class ProjectivityVerdict:
    projective: bool
    equalizer: CellComplex
    witness: Optional[Point]
    origin_in_equalizer: bool
    equalizer_connected: bool


def _refinement(pair: SubstitutionPair):
    return common_refinement(pair.d1, pair.d2)


def _zero_locus_in_cell(cell: ConvexCell, f: AffineForm2) -> Optional[ConvexCell]:
    """cell ∩ {f = 0}: the whole cell, a chord, a point, or None."""
    if f.is_zero:
        return cell
    if f.is_constant:
        return None
    from .geometry import cell_clip
    part = cell_clip(cell, f)
    if part is None:
        return None
    return cell_clip(part, -f)


def equalizer(pair: SubstitutionPair) -> CellComplex:
    """K = {(x, y) : d1(x, y) = x and d2(x, y) = y}, exactly."""
    cells = []
    for piece, f1, f2 in _refinement(pair):
        c1 = f1 - FORM_X
        c2 = f2 - FORM_Y
        e1 = _zero_locus_in_cell(piece, c1)
        if e1 is None:
            continue
        e2 = _zero_locus_in_cell(piece, c2)
        if e2 is None:
            continue
        cells.append(cell_intersection(e1, e2))
    return CellComplex.build(cells)


def image_over(pair: SubstitutionPair, domain: Optional[CellComplex] = None) -> CellComplex:
    """Exact image of (d1, d2) over the domain (default: the whole square)."""
    from .geometry import affine_image
    out = []
    for piece, f1, f2 in _refinement(pair):
        if domain is None:
            out.append(affine_image(piece, f1, f2))
            continue
        for cell in domain.cells:
            part = cell_intersection(piece, cell)
            if part is not None:
                out.append(affine_image(part, f1, f2))
    return CellComplex.build(out)


def _preimage_in_piece(piece: ConvexCell, f1: AffineForm2, f2: AffineForm2,
                       q: Point) -> Optional[Point]:
    """Lexicographically-least solution of (f1, f2)(u) = q inside the piece."""
    det = f1.a * f2.b - f1.b * f2.a
    if det != 0:
        rx = q[0] - f1.c
        ry = q[1] - f2.c
        u = ((rx * f2.b - f1.b * ry) / det, (f1.a * ry - rx * f2.a) / det)
        return u if piece.contains_point(u) else None
    # rank-deficient: the solution set of each equation is a line (or all)
    sol: Optional[ConvexCell] = piece
    for f, target in ((f1, q[0]), (f2, q[1])):
        g = f.shift(-target)
        if g.is_zero:
            continue
        if g.is_constant:
            return None
        sol = _zero_locus_in_cell(sol, g) if sol is not None else None
        if sol is None:
            return None
    return min(sol.vertices)


def preimage_point(pair: SubstitutionPair, q: Point) -> Optional[Point]:
    """Some u in the square with (d1, d2)(u) = q, lex-least per piece."""
    best: Optional[Point] = None
    for piece, f1, f2 in _refinement(pair):
        u = _preimage_in_piece(piece, f1, f2, q)
        if u is not None and (best is None or u < best):
            best = u
    return best


def check_projective(pair: SubstitutionPair) -> ProjectivityVerdict:
    """Decide the retraction condition by exact image containment.

    The condition "for every u there is x in K with d(u) = d(x)" is
    literally image(square) ⊆ image(K); the reverse inclusion always holds.
    On failure the witness is a point u whose value has no preimage in K.
    """
    K = equalizer(pair)
    img_k = image_over(pair, K)
    img_sq = image_over(pair)
    contained, missing_value = complex_contains(img_k, img_sq)
    origin_in = K.contains_point(ORIGIN)
    connected = is_connected(K)
    if contained:
        if not origin_in or not connected:
            raise InternalCheckError(
                "projective verdict with equalizer violating the necessary "
                f"conditions (origin: {origin_in}, connected: {connected})")
        return ProjectivityVerdict(True, K, None, origin_in, connected)
    witness = preimage_point(pair, missing_value)
    if witness is None:
        raise InternalCheckError(f"image point {missing_value} has no preimage")
    return ProjectivityVerdict(False, K, witness, origin_in, connected)


# ---------------------------------------------------------------------------
# independent grid oracle

@dataclass(frozen=True)
class GridOracleReport:
    denominator: int
    checked: int
    counterexamples: tuple[Point, ...]

    @property
    def refuted(self) -> bool:
        return bool(self.counterexamples)


def _k_pieces(pair: SubstitutionPair):
    K = equalizer(pair)
    out = []
    for piece, f1, f2 in _refinement(pair):
        for cell in K.cells:
            part = cell_intersection(piece, cell)
            if part is not None:
                out.append((part, f1, f2))
    return out


def grid_oracle(pair: SubstitutionPair, denominator: int,
                limit: int = 10) -> GridOracleReport:
    """For every u on the grid with the given denominator, solve d(x) = d(u)
    for x in the exact equalizer, piece by piece.  Can only refute
    projectivity, never certify it.

    Large grids run through an exact vectorized integer path; small ones
    (and inputs whose coefficients would overflow it) walk the grid
    pointwise.  Both paths perform the same per-piece algebra.
    """
    if denominator < 1:
        raise InputError("denominator must be >= 1")
    k_pieces = _k_pieces(pair)
    if denominator >= 16:
        report = _grid_oracle_vectorized(pair, denominator, limit, k_pieces)
        if report is not None:
            return report
    bad: list[Point] = []
    checked = 0
    d = denominator
    for i in range(d + 1):
        for j in range(d + 1):
            u = (Fraction(i, d), Fraction(j, d))
            checked += 1
            q = (pair.d1.evaluate(u), pair.d2.evaluate(u))
            if not any(_preimage_in_piece(part, f1, f2, q) is not None
                       for part, f1, f2 in k_pieces):
                bad.append(u)
                if len(bad) >= limit:
                    return GridOracleReport(d, checked, tuple(bad))
    return GridOracleReport(d, checked, tuple(bad))


def _rasterize_int(fn: Pwl2, D: int):
    """fn values on the D-grid as int64 numerators over D (exact; requires
    integer coefficients)."""
    import numpy as np

    sentinel = np.int64(-(10 ** 15))
    vals = np.full((D + 1, D + 1), sentinel, dtype=np.int64)
    for cell, f in fn.tiles:
        a, b, c = int(f.a), int(f.b), int(f.c)
        x0, y0, x1, y1 = cell.bbox()
        halfplanes = cell.halfplanes()
        j0 = -((-(y0 * D).numerator) // (y0 * D).denominator)
        j1 = (y1 * D).numerator // (y1 * D).denominator
        for j in range(j0, j1 + 1):
            yf = Fraction(j, D)
            lo, hi = x0, x1
            empty = False
            for g in halfplanes:
                rest = g.b * yf + g.c
                if g.a == 0:
                    if rest < 0:
                        empty = True
                        break
                elif g.a > 0:
                    lo = max(lo, -rest / g.a)
                else:
                    hi = min(hi, -rest / g.a)
            if empty or lo > hi:
                continue
            ilo = -((-(lo * D).numerator) // (lo * D).denominator)
            ihi = (hi * D).numerator // (hi * D).denominator
            if ilo > ihi:
                continue
            ii = np.arange(ilo, ihi + 1, dtype=np.int64)
            vals[ilo:ihi + 1, j] = a * ii + np.int64(b * j + c * D)
    if (vals == sentinel).any():
        raise InternalCheckError("tiling does not cover the evaluation grid")
    return vals


def _grid_oracle_vectorized(pair: SubstitutionPair, D: int, limit: int,
                            k_pieces) -> Optional[GridOracleReport]:
    """Exact integer path: None when coefficients are too large for int64."""
    import numpy as np

    for fn in (pair.d1, pair.d2):
        for _, f in fn.tiles:
            if not f.has_integer_coefficients():
                return None
    # q = d(u) with numerators over D
    q1 = _rasterize_int(pair.d1, D)
    q2 = _rasterize_int(pair.d2, D)
    covered = np.zeros(q1.shape, dtype=bool)
    bound = 0
    conditions: list[list[tuple[int, int, int]]] = []
    for part, f1, f2 in k_pieces:
        det = f1.a * f2.b - f1.b * f2.a
        conds: list[tuple[int, int, int]] = []
        if det != 0:
            # x = adj(q - c) / det; each halfplane g of the piece becomes
            # s*(alpha*q1 + beta*q2 + gamma) >= 0 with integer coefficients
            s = 1 if det > 0 else -1
            for g in part.halfplanes():
                alpha = g.a * f2.b - g.b * f2.a
                beta = -g.a * f1.b + g.b * f1.a
                gamma = (-f1.c * alpha - f2.c * beta) + g.c * det
                conds.append(_int_condition(s * alpha, s * beta, s * gamma))
        else:
            # rank-deficient piece: membership of q in the exact image cell
            from .geometry import affine_image
            img = affine_image(part, f1, f2)
            for g in img.halfplanes():
                conds.append(_int_condition(g.a, g.b, g.c))
        for alpha, beta, gamma in conds:
            bound = max(bound, (abs(alpha) + abs(beta)) * D + abs(gamma) * D)
        conditions.append(conds)
    if bound > 2 ** 61:
        return None
    for conds in conditions:
        mask = np.ones(q1.shape, dtype=bool)
        for alpha, beta, gamma in conds:
            mask &= alpha * q1 + beta * q2 + np.int64(gamma) * D >= 0
        covered |= mask
        if covered.all():
            break
    checked = (D + 1) * (D + 1)
    if covered.all():
        return GridOracleReport(D, checked, ())
    bad_idx = np.argwhere(~covered)
    bad = tuple((Fraction(int(i), D), Fraction(int(j), D))
                for i, j in bad_idx[:limit])
    return GridOracleReport(D, checked, bad)


def _int_condition(alpha: Fraction, beta: Fraction, gamma: Fraction) -> tuple[int, int, int]:
    """Scale a rational inequality alpha*q1 + beta*q2 + gamma >= 0 to
    coprime integers."""
    from math import gcd
    denom_lcm = 1
    for fr in (alpha, beta, gamma):
        denom_lcm = denom_lcm * fr.denominator // gcd(denom_lcm, fr.denominator)
    a, b, c = (int(fr * denom_lcm) for fr in (alpha, beta, gamma))
    g = gcd(gcd(abs(a), abs(b)), abs(c))
    if g > 1:
        a, b, c = a // g, b // g, c // g
    return a, b, c


# ---------------------------------------------------------------------------
# rational-point bridge between the equalizer and the archimedean test

@dataclass(frozen=True)
class BridgePoint:
    point: Point
    targets: tuple[tuple[int, int], tuple[int, int]]
    in_equalizer: bool
    join_not_archimedean: bool

    @property
    def violates(self) -> bool:
        return self.in_equalizer != self.join_not_archimedean


@dataclass(frozen=True)
class BridgeReport:
    points: tuple[BridgePoint, ...]

    @property
    def holds(self) -> bool:
        return all(not p.violates for p in self.points)

    def violations(self) -> list[BridgePoint]:
        return [p for p in self.points if p.violates]


def eta_bridge_check(pair: SubstitutionPair, prime_bound: int) -> BridgeReport:
    """Verify, for every rational point (m1/p1, m2/p2) with primes up to the
    bound, that membership in the equalizer coincides with the failure of
    the archimedean property for the join of the composed point-zero
    functions.  The biconditional holds for all points iff the pair passes
    the retraction test.
    """
    primes = [p for p in range(2, prime_bound + 1) if is_prime(p)]
    values = [(m, p) for p in primes for m in range(1, p)]
    K = equalizer(pair)
    # compose each point-zero probe through d1 / d2 once, cache its zero set
    zero_sets: dict[tuple[int, int, int], CellComplex] = {}
    for (m, p) in values:
        probe = compile_term(point_zero_term(m, p), 1)
        for idx, d in ((1, pair.d1), (2, pair.d2)):
            composed = compose_after(probe, d)
            zero_sets[(idx, m, p)] = composed.zero_set()
    points = []
    for (m1, p1) in values:
        for (m2, p2) in values:
            v = (Fraction(m1, p1), Fraction(m2, p2))
            in_k = K.contains_point(v)
            # the join is positive at the origin, so it fails to be
            # archimedean exactly when the two factors vanish together
            meet = complex_intersection(zero_sets[(1, m1, p1)], zero_sets[(2, m2, p2)])
            points.append(BridgePoint(v, ((m1, p1), (m2, p2)), in_k, not meet.is_empty))
    return BridgeReport(tuple(points))


# ---------------------------------------------------------------------------
# one-variable specialization

@dataclass(frozen=True)
class Verdict1D:
    projective: bool
    fixed_intervals: tuple[tuple[Fraction, Fraction], ...]
    witness_value: Optional[Fraction]


def fixed_point_intervals(f: Pwl1) -> list[tuple[Fraction, Fraction]]:
    """{x : f(x) = x} as merged closed intervals."""
    hits = []
    for (x0, y0), (x1, y1) in zip(f.nodes, f.nodes[1:]):
        # solve f(x) = x on the piece
        sl = (y1 - y0) / (x1 - x0)
        if sl == 1:
            if y0 == x0:
                hits.append((x0, x1))
        else:
            r = (y0 - sl * x0) / (1 - sl)
            if x0 <= r <= x1:
                hits.append((r, r))
    return merge_intervals(hits)


def retract_presentation(max_value: Fraction) -> Pwl1:
    """A one-variable generator with the given maximum whose substitution is
    a retraction: the identity up to the maximum, then the steepest integer
    descent to zero.  Any generator with the same maximum generates an
    isomorphic algebra, so this realizes constructively that every
    monogenerated subalgebra is projective.
    """
    m = Fraction(max_value)
    if not 0 <= m <= 1:
        raise InputError("maximum must lie in [0, 1]")
    if m == 0:
        return Pwl1.constant(0)
    if m == 1:
        return Pwl1.identity()
    q = m.denominator
    drop = Fraction(m.numerator, q - 1)  # where slope -(q-1) from (m, m) hits 0
    nodes = [(ZERO, ZERO), (m, m), (drop, ZERO)]
    if drop != 1:
        nodes.append((ONE, ZERO))
    return Pwl1.from_nodes(nodes)


def check_projective_1d(f: Pwl1) -> Verdict1D:
    """Retraction test for the one-variable substitution x -> f(x):
    the image of f over [0, 1] must be contained in the image of f over the
    fixed-point set (which equals the fixed-point set itself)."""
    if f.nodes[0][1] != 0:
        raise InputError("generator must vanish at 0")
    fixed = fixed_point_intervals(f)
    lo, hi = f.min_value(), f.max_value()
    cursor = lo
    for a, b in fixed:
        if a > cursor:
            break
        cursor = max(cursor, b)
    if cursor >= hi:
        return Verdict1D(True, tuple(fixed), None)
    # first uncovered value above the cursor
    gap_ends = [a for a, _ in fixed if a > cursor]
    nxt = min(gap_ends) if gap_ends else hi
    witness = (cursor + nxt) / 2 if nxt > cursor else cursor
    return Verdict1D(False, tuple(fixed), witness)
