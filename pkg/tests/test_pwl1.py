import random
from fractions import Fraction

import pytest

from mvproj.errors import InputError
from mvproj.pwl1 import (
    Pwl1,
    chang_delta,
    compose,
    intervals_to_complex,
    level_intervals,
    min_off_neighbourhood,
    mv_max,
    mv_min,
    mv_neg,
    mv_oplus,
    mv_otimes,
    scalar_mul,
    zero_intervals,
)

F = Fraction


def fn(*nodes):
    return Pwl1.from_nodes([(F(a), F(b)) for a, b in nodes])


# Example 1.5 of the worked examples battery
EX15_F = fn((0, 0), (F(1, 6), 1), (F(1, 4), 0), (F(1, 3), 1), (1, 1))
EX15_G = fn((0, 0), (F(1, 6), F(2, 3)), (F(1, 4), 0), (F(3, 8), 1), (1, 1))


def rand_mcnaughton(rng, max_pieces=5):
    """Random valid function: lattice combination of truncated integer lines."""
    f = Pwl1.constant(rng.choice([0, 1]))
    for _ in range(rng.randint(1, max_pieces)):
        s = rng.randint(-3, 3)
        c = rng.randint(-2, 3)
        # clamp s*x + c into [0,1] exactly: max(0, min(1, s*x + c)) via nodes
        xs = {F(0), F(1)}
        if s != 0:
            for target in (0, 1):
                r = F(target - c, s)
                if 0 < r < 1:
                    xs.add(r)
        basic = Pwl1.from_nodes([(x, min(F(1), max(F(0), s * x + c))) for x in sorted(xs)])
        f = mv_min(f, basic) if rng.random() < 0.5 else mv_max(f, basic)
    return f


def rand_rational(rng, den=60):
    return F(rng.randint(0, den), den)


class TestBasics:
    def test_eval_identity(self):
        assert Pwl1.identity()(F(1, 3)) == F(1, 3)

    def test_eval_example_functions(self):
        assert EX15_F(F(1, 6)) == 1          # 6x on [0, 1/6]
        assert EX15_G(F(1, 4)) == 0          # 2 - 8x at 1/4
        assert EX15_F(F(1, 5)) == 3 - 12 * F(1, 5)

    def test_domain_violation(self):
        with pytest.raises(InputError):
            Pwl1.identity()(F(3, 2))

    def test_canonical_merges_collinear(self):
        f = fn((0, 0), (F(1, 2), F(1, 2)), (1, 1))
        assert f == Pwl1.identity()

    def test_validate(self):
        assert Pwl1.identity().validate() == []
        bad = fn((0, 0), (F(1, 2), F(1, 3)), (1, 1))
        msgs = bad.validate()
        assert any("slope" in m for m in msgs)

    def test_validate_intercept(self):
        # slope 1 / intercept 1/4 piece
        bad = fn((0, F(1, 4)), (F(1, 2), F(3, 4)), (1, F(3, 4)))
        assert any("intercept" in m for m in bad.validate())


class TestMvOps:
    def test_neg_constant(self):
        assert mv_neg(Pwl1.constant(0)) == Pwl1.constant(1)

    def test_oplus_identity_pair(self):
        s = mv_oplus(Pwl1.identity(), Pwl1.identity())
        assert s(F(7, 10)) == 1
        assert s(F(1, 4)) == F(1, 2)
        assert s == fn((0, 0), (F(1, 2), 1), (1, 1))

    def test_min_tent(self):
        t = mv_min(Pwl1.identity(), mv_neg(Pwl1.identity()))
        assert t == fn((0, 0), (F(1, 2), F(1, 2)), (1, 0))

    def test_pointwise_grid_oracle(self):
        rng = random.Random(23)
        for _ in range(40):
            f, g = rand_mcnaughton(rng), rand_mcnaughton(rng)
            results = {
                "oplus": (mv_oplus(f, g), lambda a, b: min(F(1), a + b)),
                "otimes": (mv_otimes(f, g), lambda a, b: max(F(0), a + b - 1)),
                "min": (mv_min(f, g), min),
                "max": (mv_max(f, g), max),
                "delta": (chang_delta(f, g), lambda a, b: abs(a - b)),
            }
            for _ in range(25):
                x = rand_rational(rng)
                for name, (got, op) in results.items():
                    assert got(x) == op(f(x), g(x)), name

    def test_scalar_is_iterated_oplus(self):
        rng = random.Random(31)
        for _ in range(20):
            f = rand_mcnaughton(rng)
            acc = f
            for n in range(2, 5):
                acc = mv_oplus(acc, f)
                assert acc == scalar_mul(f, n)

    def test_mv_axioms_structural(self):
        rng = random.Random(47)
        for _ in range(25):
            f, g = rand_mcnaughton(rng), rand_mcnaughton(rng)
            assert mv_neg(mv_neg(f)) == f
            assert mv_oplus(f, g) == mv_oplus(g, f)
            assert mv_oplus(f, Pwl1.constant(1)) == Pwl1.constant(1)
            lhs = mv_oplus(mv_neg(mv_oplus(mv_neg(f), g)), g)
            rhs = mv_oplus(mv_neg(mv_oplus(mv_neg(g), f)), f)
            assert lhs == rhs

    def test_delta_identities(self):
        rng = random.Random(53)
        for _ in range(10):
            f = rand_mcnaughton(rng)
            assert chang_delta(f, f) == Pwl1.constant(0)
            assert chang_delta(f, Pwl1.constant(0)) == f

    def test_lipschitz_bound(self):
        rng = random.Random(59)
        for _ in range(20):
            f = rand_mcnaughton(rng)
            L = f.lipschitz_bound()
            for _ in range(20):
                x, u = rand_rational(rng), rand_rational(rng)
                assert abs(f(x) - f(u)) <= L * abs(x - u)


class TestCompose:
    def test_identity_neutral(self):
        rng = random.Random(61)
        for _ in range(10):
            f = rand_mcnaughton(rng)
            assert compose(Pwl1.identity(), f) == f
            assert compose(f, Pwl1.identity()) == f

    def test_compose_grid_oracle(self):
        rng = random.Random(67)
        for _ in range(25):
            f, g = rand_mcnaughton(rng), rand_mcnaughton(rng)
            h = compose(f, g)
            for _ in range(25):
                x = rand_rational(rng)
                assert h(x) == f(g(x))


class TestExtremaAndLevels:
    def test_min_max_at_nodes(self):
        rng = random.Random(71)
        for _ in range(20):
            f = rand_mcnaughton(rng)
            lo, hi = f.min_value(), f.max_value()
            for _ in range(30):
                v = f(rand_rational(rng))
                assert lo <= v <= hi

    def test_zero_set_of_constant_zero(self):
        assert zero_intervals(Pwl1.constant(0)) == [(F(0), F(1))]

    def test_zero_set_point(self):
        tent = mv_min(Pwl1.identity(), mv_neg(Pwl1.identity()))
        assert zero_intervals(tent) == [(F(0), F(0)), (F(1), F(1))]

    def test_level_intervals(self):
        assert level_intervals(Pwl1.identity(), F(1, 3)) == [(F(1, 3), F(1, 3))]

    def test_min_off_neighbourhood(self):
        ident = Pwl1.identity()
        assert min_off_neighbourhood(ident, F(0), F(1, 4)) == F(1, 4)
        tent = mv_min(ident, mv_neg(ident))
        assert min_off_neighbourhood(tent, F(0), F(1, 4)) == F(0)  # tent(1) = 0
        assert min_off_neighbourhood(tent, F(1, 2), F(2)) is None

    def test_intervals_embed(self):
        c = intervals_to_complex([(F(0), F(1, 2)), (F(3, 4), F(3, 4))])
        kinds = sorted(cell.kind for cell in c.cells)
        assert kinds == ["point", "segment"]
