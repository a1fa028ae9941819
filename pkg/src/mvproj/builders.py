"""Constructive production of projective generator pairs.

Three constructions, one per equalizer family:

* case i  — the equalizer is pinched between four one-variable functions
  (two as functions of x, two as functions of y) satisfying six exact
  inequalities; the pair folds the outside regions onto the boundary curves.
* case ii — the equalizer is everything above a two-piece rational roof
  through P = (bc/(ad+bc), ac/(ad+bc)); the region below the roof is filled
  with integer planes picked from the pencils through the roof edges.
* case iii — the equalizer is a triangle (or a fan of triangles) with a
  vertex at the origin; the connecting planes come from pencils through the
  triangle sides, with integer parameters found by solving small linear
  Diophantine equations.

Every build ends by running the independent projectivity checker on the
result; a failed check is an internal error, never silent output.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .errors import BuildError, InputError, InternalCheckError
from .geometry import (
    AffineForm2,
    CellComplex,
    ConvexCell,
    Point,
    UNIT_SQUARE,
    edge_form,
    form,
    line_intersection,
    split_cells_by_lines,
)
from .pwl1 import Pwl1, compose, mv_min
from .pwl2 import Pwl2, Tile
from .projectivity import ProjectivityVerdict, SubstitutionPair, check_projective
from .rationals import ONE, ZERO, ext_gcd

F = Fraction
O_POINT: Point = (ZERO, ZERO)

FORM_ZERO = form(0, 0, 0)
FORM_XX = form(1, 0, 0)
FORM_YY = form(0, 1, 0)
FORM_ONE_MINUS_X = form(-1, 0, 1)


# ---------------------------------------------------------------------------
# case i

@dataclass(frozen=True)
class RectTypeSpec:
    """Four boundary functions: f1, f2 as functions of x; g1, g2 as
    functions of y."""

    f1: Pwl1
    f2: Pwl1
    g1: Pwl1
    g2: Pwl1


def check_bullet_conditions(spec: RectTypeSpec) -> list[str]:
    """The six exact inequalities the construction needs; empty when all
    hold everywhere (decided by structural comparison of minima)."""
    out = []

    def leq(f: Pwl1, g: Pwl1, label: str):
        if mv_min(f, g) != f:
            out.append(label)

    leq(spec.f1, spec.f2, "f1 <= f2 fails")
    leq(spec.g1, spec.g2, "g1 <= g2 fails")
    ident = Pwl1.identity()
    leq(compose(spec.f1, spec.g1), ident, "y >= f1(g1(y)) fails")
    leq(ident, compose(spec.f2, spec.g1), "y <= f2(g1(y)) fails")
    leq(ident, compose(spec.f2, spec.g2), "y <= f2(g2(y)) fails")
    leq(compose(spec.f1, spec.g2), ident, "y >= f1(g2(y)) fails")
    return out


def _graph_lines_x(f: Pwl1) -> list[AffineForm2]:
    """Verticals at breakpoints plus the supporting line of every piece of
    the graph y = f(x)."""
    lines = [form(1, 0, -x) for x in f.breakpoints()]
    for (x0, y0), (x1, y1) in zip(f.nodes, f.nodes[1:]):
        s = (y1 - y0) / (x1 - x0)
        lines.append(form(-s, 1, s * x0 - y0))
    return lines


def _graph_lines_y(g: Pwl1) -> list[AffineForm2]:
    """Horizontals at breakpoints plus pieces of the graph x = g(y)."""
    lines = [form(0, 1, -y) for y in g.breakpoints()]
    for (y0, x0), (y1, x1) in zip(g.nodes, g.nodes[1:]):
        s = (x1 - x0) / (y1 - y0)
        lines.append(form(1, -s, s * y0 - x0))
    return lines


def _piece_form_of_x(f: Pwl1, x: Fraction) -> AffineForm2:
    """The affine form in (x, y) of the piece of f covering x."""
    xs = f.breakpoints()
    i = 0
    while i < len(xs) - 2 and x > xs[i + 1]:
        i += 1
    (x0, y0), (x1, y1) = f.nodes[i], f.nodes[i + 1]
    s = (y1 - y0) / (x1 - x0)
    return form(s, 0, y0 - s * x0)


def _piece_form_of_y(g: Pwl1, y: Fraction) -> AffineForm2:
    ys = g.breakpoints()
    i = 0
    while i < len(ys) - 2 and y > ys[i + 1]:
        i += 1
    (y0, x0), (y1, x1) = g.nodes[i], g.nodes[i + 1]
    s = (x1 - x0) / (y1 - y0)
    return form(0, s, x0 - s * y0)


def region_complex(spec: RectTypeSpec) -> CellComplex:
    """The prescribed equalizer {g1(y) <= x <= g2(y), f1(x) <= y <= f2(x)},
    including its lower-dimensional parts, as a canonical complex."""
    lines = (_graph_lines_x(spec.f1) + _graph_lines_x(spec.f2)
             + _graph_lines_y(spec.g1) + _graph_lines_y(spec.g2))
    faces = split_cells_by_lines([UNIT_SQUARE], lines)

    def in_k(p: Point) -> bool:
        return (spec.f1.evaluate(p[0]) <= p[1] <= spec.f2.evaluate(p[0])
                and spec.g1.evaluate(p[1]) <= p[0] <= spec.g2.evaluate(p[1]))

    cells: list[Optional[ConvexCell]] = []
    for face in faces:
        if in_k(face.barycenter()):
            cells.append(face)
            continue
        vs = face.vertices
        for i in range(len(vs)):
            a, b = vs[i], vs[(i + 1) % len(vs)]
            mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            if in_k(mid):
                cells.append(ConvexCell.from_points([a, b]))
        for v in vs:
            if in_k(v):
                cells.append(ConvexCell.from_points([v]))
    return CellComplex.build(cells)


@dataclass(frozen=True)
class CaseIBuild:
    pair: SubstitutionPair
    prescribed_equalizer: CellComplex
    verdict: ProjectivityVerdict


def build_case_i(spec: RectTypeSpec) -> CaseIBuild:
    """Fold the four outside regions onto the boundary curves.

    d1 is x on A ∪ K ∪ B, g1(y) on C = {x <= g1(y)} and g2(y) on D;
    d2 is y on C ∪ K ∪ D, f1(x) on A = {y <= f1(x)} and f2(x) on B.
    """
    problems = check_bullet_conditions(spec)
    if problems:
        raise BuildError("boundary conditions violated: " + "; ".join(problems))
    lines = (_graph_lines_x(spec.f1) + _graph_lines_x(spec.f2)
             + _graph_lines_y(spec.g1) + _graph_lines_y(spec.g2))
    faces = split_cells_by_lines([UNIT_SQUARE], lines)
    d1_tiles: list[Tile] = []
    d2_tiles: list[Tile] = []
    for face in faces:
        bx, by = face.barycenter()
        in_a = by <= spec.f1.evaluate(bx)
        in_b = by >= spec.f2.evaluate(bx)
        in_c = bx <= spec.g1.evaluate(by)
        in_d = bx >= spec.g2.evaluate(by)
        d1_choices: list[AffineForm2] = []
        d2_choices: list[AffineForm2] = []
        if in_c:
            d1_choices.append(_piece_form_of_y(spec.g1, by))
            d2_choices.append(FORM_YY)
        if in_d:
            d1_choices.append(_piece_form_of_y(spec.g2, by))
            d2_choices.append(FORM_YY)
        if in_a:
            d1_choices.append(FORM_XX)
            d2_choices.append(_piece_form_of_x(spec.f1, bx))
        if in_b:
            d1_choices.append(FORM_XX)
            d2_choices.append(_piece_form_of_x(spec.f2, bx))
        if not d1_choices:  # interior of K
            d1_choices.append(FORM_XX)
            d2_choices.append(FORM_YY)
        if (len({(f.a, f.b, f.c) for f in d1_choices}) > 1
                or len({(f.a, f.b, f.c) for f in d2_choices}) > 1):
            raise BuildError(
                f"regions overlap with conflicting values near {face.barycenter()}; "
                "the boundary functions are outside the construction's scope")
        d1_tiles.append((face, d1_choices[0]))
        d2_tiles.append((face, d2_choices[0]))
    pair = SubstitutionPair(Pwl2.from_tiles(d1_tiles), Pwl2.from_tiles(d2_tiles))
    verdict = check_projective(pair)
    if not verdict.projective:
        raise InternalCheckError("case-i construction failed the retraction test")
    return CaseIBuild(pair, region_complex(spec), verdict)


# ---------------------------------------------------------------------------
# case ii

@dataclass(frozen=True)
class CaseIIConstants:
    a: int
    b: int
    c: int
    d: int
    P: Point
    R: Point
    Q: Point
    S: Optional[Point]
    x_S: Optional[Fraction]
    T: Optional[Point]
    U: Optional[Point]
    x_U: Optional[Fraction]
    V: Optional[Point]
    case: str  # below | equal | above
    degeneracies: tuple[str, ...]


def case_ii_constants(a: int, b: int, c: int, d: int) -> CaseIIConstants:
    """The interchange points of the case-ii plane arrangement.

    Degenerate denominators (b = 1 or d = 1) are reported and replaced by
    their limit positions (S collapses onto P, T onto S), which is what the
    construction needs.
    """
    if not (a >= 1 and b >= a and c >= 1 and d >= c):
        raise InputError("need integers a >= 1, b >= a, c >= 1, d >= c")
    degeneracies = []
    P = (F(b * c, a * d + b * c), F(a * c, a * d + b * c))
    Q = (ONE, ZERO)
    R = (F(1, 2), ZERO)
    if b == 1:
        degeneracies.append("b = 1: S and V undefined; S taken at P")
        S: Optional[Point] = P
        x_S: Optional[Fraction] = None
        V: Optional[Point] = None
    else:
        den_s = (b - 1) * (a + c) + (d - b) * (a - 1)
        x_S = F(c * (b - 1), den_s)
        S = (x_S, x_S * (a - 1) / (b - 1))
        V = (F(1, 2), F(a - 1, 2 * (b - 1)))
    if d == 1:
        degeneracies.append("d = 1: T and U undefined; T taken at S")
        T: Optional[Point] = S
        U: Optional[Point] = None
        x_U: Optional[Fraction] = None
    else:
        T = (F(1, 2), F(c - 1, 2 * (d - 1)))
        den_u = (d - 1) * (a + c) - (d - b) * (c - 1)
        x_U = F(c * (b - 1) + d - b, den_u)
        U = (x_U, (c - 1) * (1 - x_U) / (d - 1))
    if x_S is None or x_S < F(1, 2):
        case = "below"
    elif x_S == F(1, 2):
        case = "equal"
    else:
        case = "above"
    return CaseIIConstants(a, b, c, d, P, R, Q, S, x_S, T, U, x_U, V,
                           case, tuple(degeneracies))


def case_ii_roof(a: int, b: int, c: int, d: int) -> Pwl1:
    """The lower boundary of the equalizer: a*x/b up to P, then c*(1-x)/d."""
    k = case_ii_constants(a, b, c, d)
    return Pwl1.from_nodes([(ZERO, ZERO), (k.P[0], k.P[1]), (ONE, ZERO)])


@dataclass(frozen=True)
class CaseIIBuild:
    pair: SubstitutionPair
    constants: CaseIIConstants
    verdict: ProjectivityVerdict


def build_case_ii(a: int, b: int, c: int, d: int) -> CaseIIBuild:
    """d1 = x everywhere; d2 = y above the roof and integer plane pieces
    below it, split at x = 1/2 and the pencil-intersection points."""
    k = case_ii_constants(a, b, c, d)
    plane1 = form(a, 1 - b, 0)              # z = (1-b)y + ax
    plane2 = form(-c, 1 - d, c)             # z = (1-d)y + c(1-x)
    half = F(1, 2)
    if k.case in ("below", "equal"):
        S = k.S if k.S is not None else k.P
        T = k.T if k.T is not None else S
        regions = [
            ([O_POINT, S, k.P], plane1),
            ([k.P, S, T, k.Q], plane2),
            ([O_POINT, S, T, k.R], FORM_XX),
            ([k.Q, k.R, T], FORM_ONE_MINUS_X),
        ]
    else:
        V = k.V if k.V is not None else k.R
        assert k.U is not None
        regions = [
            ([O_POINT, V, k.U, k.P], plane1),
            ([k.P, k.U, k.Q], plane2),
            ([O_POINT, V, k.R], FORM_XX),
            ([k.Q, k.U, V, k.R], FORM_ONE_MINUS_X),
        ]
    region_cells = []
    for pts, f in regions:
        cell = ConvexCell.from_points(pts)
        if cell is not None and cell.kind == "polygon":
            region_cells.append((cell, f))
    roof = case_ii_roof(a, b, c, d)
    lines = _graph_lines_x(roof) + [form(1, 0, -half)]
    for cell, _ in region_cells:
        vs = cell.vertices
        lines += [edge_form(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]
    faces = split_cells_by_lines([UNIT_SQUARE], lines)
    d2_tiles: list[Tile] = []
    for face in faces:
        bx, by = face.barycenter()
        if by >= roof.evaluate(bx):
            d2_tiles.append((face, FORM_YY))
            continue
        owner = next((f for cell, f in region_cells if cell.contains_point((bx, by))), None)
        if owner is None:
            raise InternalCheckError(f"face at ({bx}, {by}) below the roof has no region")
        d2_tiles.append((face, owner))
    pair = SubstitutionPair(Pwl2.coordinate(1), Pwl2.from_tiles(d2_tiles))
    verdict = check_projective(pair)
    if not verdict.projective:
        raise InternalCheckError("case-ii construction failed the retraction test")
    return CaseIIBuild(pair, k, verdict)


# ---------------------------------------------------------------------------
# small Diophantine helper (case iii)

@dataclass(frozen=True)
class DiophantineSolution:
    """Solutions of a*k + b*h = -1 for coprime a > 0 > b."""

    a: int
    b: int
    k0: int
    h0: int

    def branch(self, s: int) -> tuple[int, int]:
        return (self.k0 - s * self.b, self.h0 + s * self.a)


def solve_diophantine(a: int, b: int) -> DiophantineSolution:
    if a <= 0 or b >= 0:
        raise InputError("need a > 0 and b < 0")
    g, x, y = ext_gcd(a, b)
    if abs(g) != 1:
        raise InputError(f"gcd({a}, {b}) = {abs(g)} != 1")
    if g == 1:
        x, y = -x, -y
    return DiophantineSolution(a, b, x, y)


def _select_branch(sol: DiophantineSolution, predicate, bound: int = 200) -> tuple[int, int, int]:
    """(s, k, h) with the least |s| satisfying the predicate."""
    for s in sorted(range(-bound, bound + 1), key=lambda v: (abs(v), v < 0)):
        k, h = sol.branch(s)
        if k != 0 and predicate(F(h), F(k)):
            return s, k, h
    raise BuildError("no admissible branch of the Diophantine solution within bounds")


# ---------------------------------------------------------------------------
# case iii

@dataclass(frozen=True)
class TriangleSpec:
    """One equalizer triangle: lines through OA, OB and AB with the sign
    conventions a, a1, c > 0 and b, b1 < 0 after normalization."""

    oa: tuple[int, int]
    ob: tuple[int, int]
    ab: tuple[int, int, int]
    s: Optional[int] = None
    s1: Optional[int] = None
    l: Optional[int] = None
    m: Optional[int] = None
    t: Optional[int] = None
    t_hat: Optional[int] = None


@dataclass(frozen=True)
class TriangleFanSpec:
    triangles: tuple[TriangleSpec, ...]


@dataclass(frozen=True)
class _TriangleData:
    spec: TriangleSpec
    a: int
    b: int
    a1: int
    b1: int
    a2: int
    b2: int
    c: int
    A: Point
    B: Point


def _normalize_ray(coeffs: tuple[int, int]) -> tuple[int, int]:
    a, b = coeffs
    if a == 0 or b == 0:
        raise InputError(f"ray {coeffs} lies on an axis; no wedge through the interior")
    g = gcd(abs(a), abs(b))
    a, b = a // g, b // g
    if a < 0:
        a, b = -a, -b
    if b >= 0:
        raise InputError(f"ray {coeffs} does not cross the open first quadrant")
    return a, b


def _normalize_triangle(spec: TriangleSpec) -> _TriangleData:
    a, b = _normalize_ray(spec.oa)
    a1, b1 = _normalize_ray(spec.ob)
    if (a, b) == (a1, b1):
        raise InputError("OA and OB lie on the same line; not a triangle")
    # OA must be the lower ray: slope a/-b < a1/-b1
    if F(a, -b) > F(a1, -b1):
        a, b, a1, b1 = a1, b1, a, b
        spec = TriangleSpec(spec.ob, spec.oa, spec.ab, spec.s1, spec.s,
                            spec.l, spec.m, spec.t, spec.t_hat)
    a2, b2, c = spec.ab
    g = gcd(gcd(abs(a2), abs(b2)), abs(c))
    if g == 0:
        raise InputError("AB line is degenerate")
    a2, b2, c = a2 // g, b2 // g, c // g
    if c < 0:
        a2, b2, c = -a2, -b2, -c
    if c == 0:
        raise InputError("AB passes through the origin; not a triangle")
    delta = b * a2 - a * b2
    delta1 = b1 * a2 - a1 * b2
    if delta <= 0 or delta1 <= 0:
        raise InputError("AB does not cut both rays on the positive side")
    A = (F(-b * c, delta), F(a * c, delta))
    B = (F(-b1 * c, delta1), F(a1 * c, delta1))
    for p in (A, B):
        if not (0 <= p[0] <= 1 and 0 <= p[1] <= 1):
            raise InputError(f"triangle vertex {p} outside the unit square")
    return _TriangleData(spec, a, b, a1, b1, a2, b2, c, A, B)


def _in_square(p: Optional[Point]) -> bool:
    return p is not None and 0 <= p[0] <= 1 and 0 <= p[1] <= 1


@dataclass(frozen=True)
class _TrianglePlanes:
    """Everything case iii derives for one triangle."""

    data: _TriangleData
    k: int
    h: int
    kp: int
    hp: int
    l: int
    m: int
    P: Point
    line_oa_inner: AffineForm2   # (3): y = (h/k) x
    line_ob_outer: AffineForm2   # (6): y = (h'/k') x
    line_q: AffineForm2          # (7): through P, meets (3) at Q
    line_r: AffineForm2          # (8): through P, meets (6) at R
    Q: Point
    R: Point
    p1: AffineForm2
    p2: AffineForm2
    p4: AffineForm2
    p5: AffineForm2
    p9: AffineForm2
    p10: AffineForm2
    p11: AffineForm2
    p12: AffineForm2
    p13: AffineForm2
    p14: AffineForm2


def _lm_candidates(data: _TriangleData, limit: int = 14):
    """Negative integer pairs with the P-direction strictly inside the
    wedge, smallest |l| + |m| first."""
    lo = F(data.a, -data.b)
    hi = F(data.a1, -data.b1)
    found = []
    for total in range(2, limit + 1):
        for absl in range(1, total):
            absm = total - absl
            l, m = -absl, -absm
            ratio = F(m, l)
            if lo < ratio < hi and 1 - l * data.a2 - m * data.b2 < 0:
                found.append((l, m))
    return found


def _plane_bundle(data: _TriangleData, l: int, m: int, t: int, t_hat: int,
                  k: int, h: int, kp: int, hp: int) -> Optional[_TrianglePlanes]:
    a, b, a1, b1, a2, b2, c = (data.a, data.b, data.a1, data.b1,
                               data.a2, data.b2, data.c)
    denom = 1 - l * a2 - m * b2
    P = (F(l * c, denom), F(m * c, denom))
    if not _in_square(P):
        return None
    # pencil lines through P with integer parameters:
    # hbar*(l*(AB) - x) + kbar*(m*(AB) - y) = 0
    g, x0, y0 = ext_gcd(b, -a)
    if abs(g) != 1:
        return None
    if g == -1:
        x0, y0 = -x0, -y0
    h1, k1 = x0, y0  # hbar*b - kbar*a = 1 particular solution
    hbar, kbar = h1 + a * t, k1 + b * t
    w = hbar * l + kbar * m
    if w <= 0:
        return None
    abar, bbar, cbar = a2 * w - hbar, b2 * w - kbar, c * w
    line_q = form(abar, bbar, cbar)

    g, x0, y0 = ext_gcd(b1, -a1)
    if abs(g) != 1:
        return None
    if g == -1:
        x0, y0 = -x0, -y0
    hhat, khat = x0 + a1 * t_hat, y0 + b1 * t_hat
    w1 = hhat * l + khat * m
    if w1 <= 0:
        return None
    ahat, bhat, chat = a2 * w1 - hhat, b2 * w1 - khat, c * w1
    line_r = form(ahat, bhat, chat)

    line3 = form(h, -k, 0)   # y = (h/k) x
    line6 = form(hp, -kp, 0)
    Q = line_intersection(line3, line_q)
    R = line_intersection(line6, line_r)
    if not _in_square(Q) or not _in_square(R):
        return None
    return _TrianglePlanes(
        data, k, h, kp, hp, l, m, P,
        line3, line6, line_q, line_r, Q, R,
        p1=form(-h * b, k * b, 0),
        p2=form(h * a, -k * a, 0),
        p4=form(-hp * b1, kp * b1, 0),
        p5=form(hp * a1, -kp * a1, 0),
        p9=form(-b * abar, -b * bbar, -b * cbar),
        p10=form(a * abar, a * bbar, a * cbar),
        p11=form(-b1 * ahat, -b1 * bhat, -b1 * chat),
        p12=form(a1 * ahat, a1 * bhat, a1 * chat),
        p13=form(1 - l * a2, -l * b2, -l * c),
        p14=form(-m * a2, 1 - m * b2, -m * c),
    )


def _verify_anchor_identities(tp: _TrianglePlanes) -> None:
    """Exact identities the construction promises; failure is a bug."""
    A, B, P = tp.data.A, tp.data.B, tp.P
    checks = [
        (tp.p1(A), A[0]), (tp.p2(A), A[1]),
        (tp.p4(B), B[0]), (tp.p5(B), B[1]),
        (tp.p9(A), A[0]), (tp.p10(A), A[1]),
        (tp.p11(B), B[0]), (tp.p12(B), B[1]),
        (tp.p13(A), A[0]), (tp.p13(B), B[0]), (tp.p13(P), ZERO),
        (tp.p14(A), A[1]), (tp.p14(B), B[1]), (tp.p14(P), ZERO),
        (tp.p9(P), ZERO), (tp.p10(P), ZERO),
        (tp.p11(P), ZERO), (tp.p12(P), ZERO),
        (tp.p9(tp.Q), ZERO), (tp.p10(tp.Q), ZERO),
        (tp.p11(tp.R), ZERO), (tp.p12(tp.R), ZERO),
        (tp.p1(tp.Q), ZERO), (tp.p2(tp.Q), ZERO),
        (tp.p4(tp.R), ZERO), (tp.p5(tp.R), ZERO),
        (tp.k * tp.data.a + tp.h * tp.data.b, -1),
        (tp.kp * tp.data.a1 + tp.hp * tp.data.b1, -1),
    ]
    for got, want in checks:
        if got != want:
            raise InternalCheckError(f"plane anchor identity failed: {got} != {want}")


def _pencil_parameter_seeds(a: int, b: int, l: int, m: int, count: int) -> list[int]:
    """Integer parameters t for which the plane pair anchored by h*b - k*a = 1
    with (h, k) = (h1 + a*t, k1 + b*t) has positive axis height l*h + m*k;
    the ones nearest the feasibility boundary come first."""
    g, x0, y0 = ext_gcd(b, -a)
    if abs(g) != 1:
        return []
    if g == -1:
        x0, y0 = -x0, -y0
    h1, k1 = x0, y0
    slope = l * a + m * b
    base = l * h1 + m * k1  # positivity: base + t*slope > 0
    if slope == 0:
        return list(range(0, count)) if base > 0 else []
    bound = F(-base, slope)
    edge = bound.numerator // bound.denominator  # floor
    if slope > 0:  # t > bound, smallest first
        start = edge + 1
        return list(range(start, start + count))
    start = edge if F(edge) < bound else edge - 1
    return list(range(start, start - count, -1))


def _triangle_candidates(data: _TriangleData, widen: int):
    """Deterministic stream of parameter bundles, smallest parameters first."""
    spec = data.spec
    sol_oa = solve_diophantine(data.a, data.b)
    sol_ob = solve_diophantine(data.a1, data.b1)
    slope_cap = F(data.a, -data.b)
    if spec.s is not None:
        k, h = sol_oa.branch(spec.s)
        oa_branches = [(k, h)]
    else:
        _, k, h = _select_branch(sol_oa, lambda hh, kk: 0 < hh / kk < slope_cap)
        oa_branches = [(k, h)]
    slope_floor = F(data.a1, -data.b1)
    if spec.s1 is not None:
        kp, hp = sol_ob.branch(spec.s1)
        ob_branches = [(kp, hp)]
    else:
        _, kp, hp = _select_branch(sol_ob, lambda hh, kk: hh / kk > slope_floor)
        ob_branches = [(kp, hp)]
    lm_list = [(spec.l, spec.m)] if spec.l is not None and spec.m is not None \
        else _lm_candidates(data)[: 4 + widen]
    if not lm_list:
        raise BuildError("no integer direction (l, m) strictly inside the wedge; "
                         "the wedge is too narrow for the bounded search")
    for (k, h), (kp, hp), (l, m) in itertools.product(oa_branches, ob_branches, lm_list):
        t_vals = ([spec.t] if spec.t is not None
                  else _pencil_parameter_seeds(data.a, data.b, l, m, 3 + widen))
        that_vals = ([spec.t_hat] if spec.t_hat is not None
                     else _pencil_parameter_seeds(data.a1, data.b1, l, m, 3 + widen))
        for t in t_vals:
            for t_hat in that_vals:
                bundle = _plane_bundle(data, l, m, t, t_hat, k, h, kp, hp)
                if bundle is not None:
                    yield bundle


@dataclass(frozen=True)
class CaseIIIBuild:
    pair: SubstitutionPair
    prescribed_equalizer: CellComplex
    verdict: ProjectivityVerdict
    parameters: tuple[dict, ...]


def _assemble_fan(bundles: Sequence[_TrianglePlanes]) -> tuple[Pwl2, Pwl2]:
    n = len(bundles)
    lines: list[AffineForm2] = []
    regions: list[tuple[ConvexCell, AffineForm2, AffineForm2]] = []

    def add_region(pts: Sequence[Point], f1: AffineForm2, f2: AffineForm2):
        cell = ConvexCell.from_points(pts)
        if cell is not None and cell.kind == "polygon":
            regions.append((cell, f1, f2))
            vs = cell.vertices
            lines.extend(edge_form(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    stitch_points: list[Point] = []
    for i, tp in enumerate(bundles):
        A, B, P = tp.data.A, tp.data.B, tp.P
        add_region([O_POINT, A, B], FORM_XX, FORM_YY)          # equalizer triangle
        add_region([A, P, B], tp.p13, tp.p14)                  # beyond AB
        if i == 0:
            add_region([O_POINT, tp.Q, A], tp.p1, tp.p2)
            add_region([tp.Q, A, P], tp.p9, tp.p10)
        if i == n - 1:
            add_region([P, B, tp.R], tp.p11, tp.p12)
            add_region([B, tp.R, O_POINT], tp.p4, tp.p5)
        else:
            nxt = bundles[i + 1]
            S = line_intersection(tp.line_r, nxt.line_q)
            if not _in_square(S):
                raise BuildError("fan stitch point missing or outside the square")
            stitch_points.append(S)
            add_region([P, B, S], tp.p11, tp.p12)
            add_region([B, S, nxt.P], nxt.p9, nxt.p10)
    faces = split_cells_by_lines([UNIT_SQUARE], lines)
    d1_tiles: list[Tile] = []
    d2_tiles: list[Tile] = []
    for face in faces:
        q = face.barycenter()
        owner = next(((f1, f2) for cell, f1, f2 in regions if cell.contains_point(q)), None)
        f1, f2 = owner if owner is not None else (FORM_ZERO, FORM_ZERO)
        d1_tiles.append((face, f1))
        d2_tiles.append((face, f2))
    return Pwl2.from_tiles(d1_tiles), Pwl2.from_tiles(d2_tiles)


def build_case_iii(spec: TriangleFanSpec) -> CaseIIIBuild:
    """Connect the triangle fan to zero through pencil planes with small
    integer parameters; search is deterministic and bounded."""
    if not spec.triangles:
        raise InputError("fan needs at least one triangle")
    datas = [_normalize_triangle(t) for t in spec.triangles]
    datas.sort(key=lambda d: F(d.a, -d.b))
    for cur, nxt in zip(datas, datas[1:]):
        if (cur.a1, cur.b1) != (nxt.a, nxt.b):
            raise InputError("fan triangles must be adjacent along shared rays")
    last_error: Optional[Exception] = None
    for widen in range(0, 3):
        streams = [_triangle_candidates(d, widen) for d in datas]
        combos = itertools.islice(itertools.product(*[list(s) for s in streams]), 64)
        for bundles in combos:
            try:
                for tp in bundles:
                    _verify_anchor_identities(tp)
                d1, d2 = _assemble_fan(bundles)
                pair = SubstitutionPair(d1, d2)
                verdict = check_projective(pair)
                if not verdict.projective:
                    raise InternalCheckError("case-iii assembly failed the retraction test")
            except (BuildError, InputError, InternalCheckError) as exc:
                last_error = exc
                continue
            prescribed = CellComplex.build(
                [ConvexCell.from_points([O_POINT, d.A, d.B]) for d in datas])
            params = tuple(
                {"oa_multipliers": (tp.k, tp.h), "ob_multipliers": (tp.kp, tp.hp),
                 "l": tp.l, "m": tp.m, "outer_point": tp.P}
                for tp in bundles)
            return CaseIIIBuild(pair, prescribed, verdict, params)
    raise BuildError(f"no admissible case-iii parameters within search bounds; "
                     f"last failure: {last_error}")


# ---------------------------------------------------------------------------
# the parameter-transfer remark and the two-triangle matching lemma

def remark_32_transfer(a, b, c, s) -> Fraction:
    """t = b + s(c - b)/a: the abscissa over the (b, c)-span matching the
    abscissa s over the (0, a)-span so that both line pairs agree."""
    a, b, c, s = F(a), F(b), F(c), F(s)
    if a == 0 or b == 0 or c == 0 or len({a, b, c}) != 3:
        raise InputError("a, b, c must be nonzero and pairwise different")
    return b + s * (c - b) / a


def remark_32_inverse(a, b, c, t) -> Fraction:
    a, b, c, t = F(a), F(b), F(c), F(t)
    if a == 0 or b == 0 or c == 0 or len({a, b, c}) != 3:
        raise InputError("a, b, c must be nonzero and pairwise different")
    return a * (t - b) / (c - b)


def remark_32_heights(a, b, c, h, k, l, s) -> dict:
    """The four line heights of the remark: u, u' at x = s on the lines
    through (0,0)-(a,h) and (0,k)-(a,l); v, v' at x = t on the lines through
    (b,0)-(c,h) and (b,k)-(c,l).  With t as above, u = v and u' = v'."""
    a, b, c, h, k, l, s = map(F, (a, b, c, h, k, l, s))
    t = remark_32_transfer(a, b, c, s)
    u = s * h / a
    u_prime = k + s * (l - k) / a
    v = (t - b) * h / (c - b)
    v_prime = k + (t - b) * (l - k) / (c - b)
    return {"t": t, "u": u, "u_prime": u_prime, "v": v, "v_prime": v_prime}


def plane_through(points: Sequence[Point], values: Sequence[Fraction]) -> AffineForm2:
    """The affine form taking the given values at three non-collinear points."""
    (x1, y1), (x2, y2), (x3, y3) = points
    v1, v2, v3 = map(F, values)
    det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    if det == 0:
        raise InputError("base points are collinear")
    a = ((v2 - v1) * (y3 - y1) - (v3 - v1) * (y2 - y1)) / det
    b = ((x2 - x1) * (v3 - v1) - (x3 - x1) * (v2 - v1)) / det
    c = v1 - a * x1 - b * y1
    return AffineForm2(a, b, c)


def prop_33_witness(heights_a: Sequence, heights_b: Sequence,
                    base: Sequence[Point], target: Sequence[Point],
                    index_list: Sequence[int], query: Point) -> Point:
    """Given two stacked planes over a base triangle and their re-indexed
    copies over a target triangle, map a target-triangle point to a base
    point at which both planes take the same values.

    Realizes the two-step transfer of the matching lemma: project the query
    through the first target vertex onto the opposite side, carry the side
    parameter over to the base triangle, then carry the radial parameter.
    """
    if sorted(set(index_list)) and not all(1 <= i <= 3 for i in index_list):
        raise InputError("index list entries must be in {1, 2, 3}")
    if len(index_list) != 3:
        raise InputError("index list must have three entries")
    ha = [F(v) for v in heights_a]
    hb = [F(v) for v in heights_b]
    base = [(F(p[0]), F(p[1])) for p in base]
    target = [(F(p[0]), F(p[1])) for p in target]
    query = (F(query[0]), F(query[1]))
    i1, i2, i3 = (i - 1 for i in index_list)
    f_a = plane_through(base, ha)
    f_b = plane_through(base, hb)
    f_l = plane_through(target, [ha[i1], ha[i2], ha[i3]])
    f_m = plane_through(target, [hb[i1], hb[i2], hb[i3]])
    j1, j2, j3 = target
    c_pts = [base[i1], base[i2], base[i3]]
    if query == j1:
        witness = c_pts[0]
    else:
        ray = edge_form(j1, query)
        va, vb = ray(j2), ray(j3)
        if va == vb:
            raise InputError("query is not inside the target triangle")
        lam = va / (va - vb)
        xi4 = (j2[0] + lam * (j3[0] - j2[0]), j2[1] + lam * (j3[1] - j2[1]))
        x4 = (c_pts[1][0] + lam * (c_pts[2][0] - c_pts[1][0]),
              c_pts[1][1] + lam * (c_pts[2][1] - c_pts[1][1]))
        dx, dy = xi4[0] - j1[0], xi4[1] - j1[1]
        mu = (query[0] - j1[0]) / dx if dx != 0 else (query[1] - j1[1]) / dy
        witness = (c_pts[0][0] + mu * (x4[0] - c_pts[0][0]),
                   c_pts[0][1] + mu * (x4[1] - c_pts[0][1]))
    if f_l(query) != f_a(witness) or f_m(query) != f_b(witness):
        raise InternalCheckError("transfer construction did not match plane values")
    return witness
