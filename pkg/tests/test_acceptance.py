"""Acceptance gate.

One test per criterion; each prints a single PASS/FAIL line (run with
``pytest tests/test_acceptance.py -v -s`` to see them).  All tolerances are
zero: every comparison is exact rational or integer arithmetic.

Criterion 8 is marked as an expected failure: the fixed-point image test it
prescribes does not hold for every valid generator (see the failing test's
docstring for a two-piece counterexample); the companion test underneath
carries the actual mathematical content constructively.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from mvproj.builders import (
    RectTypeSpec,
    TriangleFanSpec,
    TriangleSpec,
    build_case_i,
    build_case_ii,
    build_case_iii,
    case_ii_constants,
)
from mvproj.chain import ChainElement, is_cyclic_generator
from mvproj.geometry import CellComplex, ConvexCell, complexes_equal, pt
from mvproj.projectivity import (
    SubstitutionPair,
    check_projective,
    check_projective_1d,
    eta_bridge_check,
    grid_oracle,
    image_over,
    retract_presentation,
)
from mvproj.pwl1 import Pwl1, min_off_neighbourhood, mv_neg, zero_intervals
from mvproj.pwl2 import Pwl2, scalar_mul
from mvproj.ranges import extremals, iso_by_range, pair_range
from mvproj.rationals import is_prime
from mvproj.terms import compile_term, point_zero_term
from tests.test_terms import rand_term

F = Fraction


def report(number: int, ok: bool, detail: str) -> None:
    tag = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE {number:2d}: {tag} - {detail}")
    assert ok, f"criterion {number}: {detail}"


def fn(*nodes) -> Pwl1:
    return Pwl1.from_nodes([(F(a), F(b)) for a, b in nodes])


# -- shared fixtures ---------------------------------------------------------

@pytest.fixture(scope="module")
def example_34():
    spec = RectTypeSpec(
        f1=fn((0, 0), (F(1, 3), F(1, 3)), (F(1, 2), 0), (F(2, 3), F(1, 3)), (1, 0)),
        f2=fn((0, 1), (F(1, 2), F(1, 2)), (1, 1)),
        g1=fn((0, 0), (F(1, 4), 0), (F(1, 3), F(1, 3)), (F(1, 2), 0),
              (F(2, 3), F(1, 3)), (1, 0)),
        g2=fn((0, 1), (F(1, 3), 1), (F(2, 5), F(4, 5)), (F(1, 2), 1), (F(2, 3), 1),
              (F(5, 7), F(6, 7)), (F(3, 4), 1), (1, 1)),
    )
    return spec, build_case_i(spec)


@pytest.fixture(scope="module")
def example_35():
    tent = fn((0, 0), (F(1, 2), F(1, 2)), (1, 0))
    roof = fn((0, 1), (F(1, 2), F(1, 2)), (1, 1))
    return build_case_i(RectTypeSpec(tent, roof, tent, roof))


@pytest.fixture(scope="module")
def example_36():
    return build_case_ii(2, 7, 3, 8)


DOUBLING = SubstitutionPair(scalar_mul(Pwl2.coordinate(1), 2), Pwl2.coordinate(2))


# -- grid rasterization (exact integer arithmetic, vectorized) ----------------

def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def eval_on_grid(f: Pwl2, D: int) -> np.ndarray:
    """vals[i, j] = D * f(i/D, j/D) as int64; exact because every tile form
    has integer coefficients."""
    sentinel = np.int64(-(10 ** 15))
    vals = np.full((D + 1, D + 1), sentinel, dtype=np.int64)
    for cell, form_ in f.tiles:
        a, b, c = int(form_.a), int(form_.b), int(form_.c)
        x0, y0, x1, y1 = cell.bbox()
        halfplanes = cell.halfplanes()
        for j in range(_ceil(y0 * D), _floor(y1 * D) + 1):
            yf = F(j, D)
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
            ilo, ihi = _ceil(lo * D), _floor(hi * D)
            if ilo > ihi:
                continue
            ii = np.arange(ilo, ihi + 1, dtype=np.int64)
            vals[ilo:ihi + 1, j] = a * ii + np.int64(b * j + c * D)
    assert (vals > sentinel).all(), "tiles do not cover the grid"
    return vals


def _grid(D: int):
    return np.meshgrid(np.arange(D + 1, dtype=np.int64),
                       np.arange(D + 1, dtype=np.int64), indexing="ij")


def d1_table_34(D: int) -> np.ndarray:
    I, J = _grid(D)
    rows = [
        ((I <= 4 * J - D) & (3 * J <= D), 4 * J - D),
        ((I <= D - 2 * J) & (3 * J >= D), D - 2 * J),
        ((I <= 2 * J - D) & (3 * J <= 2 * D), 2 * J - D),
        ((I <= D - J) & (3 * J >= 2 * D), D - J),
        ((I >= 2 * D - 3 * J) & (5 * J <= 2 * D), 2 * D - 3 * J),
        ((I >= 2 * J) & (5 * J >= 2 * D), 2 * J),
        ((I >= 3 * D - 3 * J) & (7 * J <= 5 * D), 3 * D - 3 * J),
        ((I >= 4 * J - 2 * D) & (7 * J >= 5 * D), 4 * J - 2 * D),
    ]
    out = I.copy()
    for cond, val in reversed(rows):
        out = np.where(cond, val, out)
    return out


def d2_table_34(D: int) -> np.ndarray:
    I, J = _grid(D)
    rows = [
        ((J <= I) & (3 * I <= D), I),
        ((J <= D - 2 * I) & (3 * I >= D), D - 2 * I),
        ((J <= 2 * I - D) & (3 * I <= 2 * D), 2 * I - D),
        ((J <= D - I) & (3 * I >= 2 * D), D - I),
        ((J >= D - I) & (2 * I <= D), D - I),
        ((J >= I) & (2 * I >= D), I),
    ]
    out = J.copy()
    for cond, val in reversed(rows):
        out = np.where(cond, val, out)
    return out


def d2_table_36(D: int) -> tuple[np.ndarray, np.ndarray]:
    """Values and coverage mask of the printed five-region table."""
    I, J = _grid(D)
    rows = [
        ((7 * J <= 2 * I) & (J <= 3 * D - 5 * I) & (6 * J >= I)
         & (6 * J >= 3 * I - D), 2 * (I - 3 * J)),
        ((J >= 3 * D - 5 * I) & (8 * J <= 3 * (D - I))
         & (7 * J >= 2 * (D - I)), 3 * (D - I) - 7 * J),
        ((6 * J <= I) & (2 * I <= D), I),
        ((2 * I >= D) & (6 * J <= 3 * I - D) & (7 * J <= 2 * (D - I)), D - I),
        ((7 * J >= 2 * I) | (8 * J >= 3 * (D - I)), J),
    ]
    out = np.zeros_like(I)
    matched = np.zeros(I.shape, dtype=bool)
    for cond, val in reversed(rows):
        out = np.where(cond, val, out)
        matched |= cond
    return out, matched


# -- the criteria -------------------------------------------------------------

def test_criterion_1_cyclic_generators():
    """Every element of a prime chain descends to the unit; the composite
    counterexample 2/4 does not.  Target: under five seconds."""
    start = time.monotonic()
    checked = 0
    for p in range(2, 200):
        if not is_prime(p):
            continue
        for m in range(1, p):
            assert is_cyclic_generator(ChainElement(m, p)) is not None, (m, p)
            checked += 1
    assert is_cyclic_generator(ChainElement(2, 4)) is None
    elapsed = time.monotonic() - start
    report(1, elapsed < 5.0,
           f"{checked} chain elements cyclic for primes <= 199, 2/4 not, "
           f"in {elapsed:.2f}s (< 5s)")


def test_criterion_2_point_zero_functions():
    """Exact zero set {m/p} and positive lower bounds off neighbourhoods."""
    checked = 0
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        for m in range(1, p):
            t = compile_term(point_zero_term(m, p), 1)
            assert zero_intervals(t) == [(F(m, p), F(m, p))], (m, p)
            for L in range(2, 11):
                lo = min_off_neighbourhood(t, F(m, p), F(1, L))
                assert lo is None or lo > 0, (m, p, L)
            checked += 1
    report(2, True, f"{checked} point-zero functions exact for primes <= 31, "
                    "positive off every 1/L-neighbourhood (L <= 10)")


EX15 = dict(
    f=fn((0, 0), (F(1, 6), 1), (F(1, 4), 0), (F(1, 3), 1), (1, 1)),
    g=fn((0, 0), (F(1, 6), F(2, 3)), (F(1, 4), 0), (F(3, 8), 1), (1, 1)),
    f1=fn((0, 0), (F(1, 3), 1), (1, 1)),
    g1=fn((0, 0), (F(1, 2), 1), (1, 1)),
)


def test_criterion_3_range_isomorphism():
    """The folded pair and the monotone pair have equal ranges; a perturbed
    partner does not."""
    assert iso_by_range(EX15["f"], EX15["g"], EX15["f1"], EX15["g1"])
    perturbed = fn((0, 0), (F(1, 3), 1), (1, 1))  # min(1, 3x) replacing g1
    assert not iso_by_range(EX15["f"], EX15["g"], EX15["f1"], perturbed)
    report(3, True, "range equality certifies the isomorphic pair and "
                    "rejects the perturbed one, exactly")


def test_criterion_4_diagonals_example(example_35):
    f = fn((0, 0), (F(1, 3), 1), (F(2, 3), 0), (1, 1))
    g = fn((0, 0), (F(1, 3), 1), (F(1, 2), F(1, 2)), (F(2, 3), 1), (1, 0))
    got = extremals(f, g).points
    want = (pt(0, 0), pt(1, 1), pt(F(1, 2), F(1, 2)), pt(0, 1), pt(1, 0))
    assert got == want
    diagonals = CellComplex.build([
        ConvexCell.from_points([pt(0, 0), pt(1, 1)]),
        ConvexCell.from_points([pt(0, 1), pt(1, 0)]),
    ])
    assert complexes_equal(image_over(example_35.pair), diagonals)
    assert complexes_equal(pair_range(f, g), image_over(example_35.pair))
    report(4, True, "extremals (0,0),(1,1),(1/2,1/2),(0,1),(1,0); built pair "
                    "maps the square onto the diagonals; ranges equal")


def test_criterion_5_case_i_tables(example_34):
    spec, build = example_34
    from mvproj.builders import check_bullet_conditions
    assert check_bullet_conditions(spec) == []
    assert build.verdict.projective
    D = 840
    got_d1 = eval_on_grid(build.pair.d1, D)
    got_d2 = eval_on_grid(build.pair.d2, D)
    assert (got_d1 == d1_table_34(D)).all()
    assert (got_d2 == d2_table_34(D)).all()
    report(5, True, f"boundary conditions hold; built pair equals the printed "
                    f"tables at all {(D + 1) ** 2} grid points (denominator {D}); "
                    "projective")


def test_criterion_6_case_ii_tables(example_36):
    k = case_ii_constants(2, 7, 3, 8)
    assert k.P == (F(21, 37), F(6, 37))
    assert k.x_S == F(18, 31)
    assert k.x_U == F(19, 33)
    assert k.V == (F(1, 2), F(1, 12))
    assert example_36.verdict.projective
    D = 1386
    got = eval_on_grid(example_36.pair.d2, D)
    want, matched = d2_table_36(D)
    assert matched.all(), "printed table rows do not cover the grid"
    assert (got == want).all()
    report(6, True, f"all four interchange constants exact; built lower "
                    f"generator equals the printed table at all "
                    f"{(D + 1) ** 2} grid points (denominator {D}); projective")


def _battery(example_34, example_35, example_36):
    pairs = [
        ("case-i diagonals", example_35.pair),
        ("case-i worked example", example_34[1].pair),
        ("case-i trivial", build_case_i(RectTypeSpec(
            Pwl1.constant(0), Pwl1.constant(1),
            Pwl1.constant(0), Pwl1.constant(1))).pair),
        ("case-ii worked example", example_36.pair),
        ("case-ii tent", build_case_ii(1, 1, 1, 1).pair),
        ("case-ii equal branch", build_case_ii(1, 2, 1, 2).pair),
        ("case-ii below branch", build_case_ii(2, 3, 1, 4).pair),
        ("case-ii above with a=1", build_case_ii(1, 2, 2, 2).pair),
        ("case-iii triangle", build_case_iii(TriangleFanSpec(
            (TriangleSpec((1, -1), (2, -1), (-1, -1, 1)),))).pair),
        ("case-iii steeper triangle", build_case_iii(TriangleFanSpec(
            (TriangleSpec((1, -2), (3, -1), (-1, -1, 1)),))).pair),
        ("case-iii fan", build_case_iii(TriangleFanSpec((
            TriangleSpec((1, -1), (2, -1), (-1, -1, 1)),
            TriangleSpec((2, -1), (3, -1), (-1, -1, 1)),))).pair),
        ("identity", SubstitutionPair.identity()),
        ("doubling in x", DOUBLING),
        ("doubling in y", SubstitutionPair(
            Pwl2.coordinate(1), scalar_mul(Pwl2.coordinate(2), 2))),
        ("negation pair", SubstitutionPair(
            scalar_mul(Pwl2.coordinate(1), 3), Pwl2.coordinate(2))),
    ]
    rng = random.Random(40411)
    while len(pairs) < 20:
        a = rng.randint(1, 3)
        b = rng.randint(a, a + 4)
        c = rng.randint(1, 3)
        d = rng.randint(c, c + 4)
        pairs.append((f"case-ii random ({a},{b},{c},{d})",
                      build_case_ii(a, b, c, d).pair))
    return pairs


def test_criterion_7_checker_oracle_agreement(example_34, example_35, example_36):
    """On the whole battery the exact checker and the independent grid
    oracle never disagree; refutations appear only for checker-false pairs
    and every such pair is refuted at some denominator <= 64."""
    start = time.monotonic()
    pairs = _battery(example_34, example_35, example_36)
    assert len(pairs) >= 20
    refuted_names = []
    for name, pair in pairs:
        verdict = check_projective(pair)
        if verdict.projective:
            rep = grid_oracle(pair, 6)
            assert not rep.refuted, f"oracle refuted projective pair {name}"
        else:
            found = False
            d = 2
            while d <= 64 and not found:
                found = grid_oracle(pair, d).refuted
                d *= 2
            assert found, f"no oracle counterexample for non-projective {name}"
            refuted_names.append(name)
    elapsed = time.monotonic() - start
    report(7, elapsed < 60.0,
           f"{len(pairs)} pairs consistent (oracle refuted exactly "
           f"{refuted_names}) in {elapsed:.1f}s (< 60s)")


def _random_generator_1d(rng: random.Random) -> Pwl1:
    f = compile_term(rand_term(rng, 1, depth=4), 1)
    if f.evaluate(0) == 1:
        f = mv_neg(f)
    assert f.evaluate(0) == 0
    return f


@pytest.mark.xfail(
    strict=True,
    reason="spec defect: the fixed-point image test is necessary and "
           "sufficient for the *given* substitution x -> f(x) to be a "
           "retraction (two-variable theorem specialized), but not every "
           "valid generator passes it even though its algebra is projective; "
           "f with nodes (0,0),(1/2,0),(1,1) has fixed points {0, 1} and "
           "image [0,1].  See the companion test for the constructive "
           "content of the corollary.")
def test_criterion_8_monogenerated_as_specified():
    """As specified: 200 random valid generators all pass the fixed-point
    image test.  This is not a theorem, and seeded sampling finds
    counterexamples; the test is kept faithful and expected to fail."""
    rng = random.Random(20260810)
    failures = []
    for _ in range(200):
        f = _random_generator_1d(rng)
        if not check_projective_1d(f).projective:
            failures.append(f.nodes)
    ok = not failures
    tag = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE  8: {tag} - as-specified fixed-point image test on "
          f"200 random generators ({len(failures)} counterexamples; "
          "expected failure, see ledger)")
    assert ok


def test_criterion_8_companion_constructive_projectivity():
    """The content behind the criterion, in checkable form: every
    monogenerated subalgebra has an isomorphic presentation (same maximum,
    hence equal one-point ranges) that passes the retraction test."""
    rng = random.Random(20260810)
    for _ in range(200):
        f = _random_generator_1d(rng)
        g = retract_presentation(f.max_value())
        assert g.validate() == []
        assert g.max_value() == f.max_value()
        assert check_projective_1d(g).projective
    print("\nACCEPTANCE  8*: PASS - companion: normalized presentations of all "
          "200 random generators pass the retraction test")


def test_criterion_9_bridge(example_34):
    """The equalizer/archimedean biconditional on rational points with
    primes <= 5: holds for the two projective pairs, fails for the doubling
    pair exactly at non-equalizer points."""
    identity = SubstitutionPair.identity()
    rep_id = eta_bridge_check(identity, 5)
    assert rep_id.holds and len(rep_id.points) == 49
    rep_34 = eta_bridge_check(example_34[1].pair, 5)
    assert rep_34.holds
    rep_bad = eta_bridge_check(DOUBLING, 5)
    assert not rep_bad.holds
    for p in rep_bad.violations():
        assert not p.in_equalizer and p.join_not_archimedean
    report(9, True, "biconditional holds at all 49 points for the identity "
                    "and the worked case-i pair; doubling violations are "
                    "exactly its non-equalizer points "
                    f"({len(rep_bad.violations())} of 49)")


def test_criterion_10_lipschitz():
    """Compiled slope bound dominates the distance quotient, exactly."""
    rng = random.Random(1803)
    triples = 0
    while triples < 500:
        if triples % 2 == 0:
            f = compile_term(rand_term(rng, 1, depth=3), 1)
            L = f.lipschitz_bound()
            for _ in range(10):
                x = F(rng.randint(0, 48), 48)
                u = F(rng.randint(0, 48), 48)
                assert abs(f(x) - f(u)) <= L * abs(x - u)
                triples += 1
        else:
            f2 = compile_term(rand_term(rng, 2, depth=2), 2)
            L = f2.lipschitz_bound()
            for _ in range(10):
                x = (F(rng.randint(0, 12), 12), F(rng.randint(0, 12), 12))
                u = (F(rng.randint(0, 12), 12), F(rng.randint(0, 12), 12))
                lhs = abs(f2(x) - f2(u))
                rhs = L * (abs(x[0] - u[0]) + abs(x[1] - u[1]))
                assert lhs <= rhs
                triples += 1
    report(10, True, f"{triples} random (term, x, u) triples satisfy the "
                     "compiled Lipschitz bound exactly")


def test_criterion_11_goldens():
    from tests.goldens import GOLDEN_DIR, PRODUCERS
    for name, producer in PRODUCERS.items():
        first, second = producer(), producer()
        assert first == second, f"{name} unstable"
        assert first == (GOLDEN_DIR / name).read_text(), f"{name} drifted"
    report(11, True, f"{len(PRODUCERS)} golden artifacts byte-stable across "
                     "two runs and equal to the committed files")
