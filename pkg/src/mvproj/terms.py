"""MV-term syntax trees, the distinguished zero-pinning terms, compilation
to piecewise-linear functions, and archimedean tests.

The three distinguished constructions, for 0 < m < p with p prime:

* ``descent_term(m, p)`` compiles to a three-piece function carrying m/p to
  1/p (built from the chain-orbit multipliers of m/p);
* ``unit_zero_term(p)`` compiles to a function vanishing exactly at 1/p;
* ``point_zero_term(m, p)`` is their composition, vanishing exactly at m/p
  and bounded away from zero off any neighbourhood of it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import pwl1, pwl2
from .chain import multipliers
from .errors import InputError
from .geometry import CellComplex, Point, complex_intersection
from .pwl1 import Pwl1
from .pwl2 import Pwl2
from .rationals import is_prime


class MvTerm:
    """Base class; subclasses form the AST."""

    __slots__ = ()

    def arity(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Var(MvTerm):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise InputError("variable indices start at 1")

    def arity(self) -> int:
        return self.index


@dataclass(frozen=True)
class Zero(MvTerm):
    def arity(self) -> int:
        return 0


@dataclass(frozen=True)
class One(MvTerm):
    def arity(self) -> int:
        return 0


@dataclass(frozen=True)
class Neg(MvTerm):
    arg: MvTerm

    def arity(self) -> int:
        return self.arg.arity()


@dataclass(frozen=True)
class Scalar(MvTerm):
    """n-fold truncated sum of the argument."""

    n: int
    arg: MvTerm

    def __post_init__(self):
        if self.n < 1:
            raise InputError("scalar multiplier must be >= 1")

    def arity(self) -> int:
        return self.arg.arity()


@dataclass(frozen=True)
class _Binary(MvTerm):
    left: MvTerm
    right: MvTerm

    def arity(self) -> int:
        return max(self.left.arity(), self.right.arity())


class OPlus(_Binary):
    pass


class OTimes(_Binary):
    pass


class Min(_Binary):
    pass


class Max(_Binary):
    pass


def substitute(term: MvTerm, replacements: dict[int, MvTerm]) -> MvTerm:
    if isinstance(term, Var):
        return replacements.get(term.index, term)
    if isinstance(term, (Zero, One)):
        return term
    if isinstance(term, Neg):
        return Neg(substitute(term.arg, replacements))
    if isinstance(term, Scalar):
        return Scalar(term.n, substitute(term.arg, replacements))
    assert isinstance(term, _Binary)
    return type(term)(substitute(term.left, replacements),
                      substitute(term.right, replacements))


# ---------------------------------------------------------------------------
# the distinguished terms

def descent_term(m: int, p: int) -> MvTerm:
    """Nested term (n_k(...(n_2(n_1 x)')'...)')' from the orbit multipliers;
    its compilation carries m/p to 1/p.  For m = 1 the orbit is trivial and
    the term is just x."""
    term: MvTerm = Var(1)
    for r in multipliers(m, p):
        term = Neg(Scalar(r, term))
    return term


def unit_zero_term(p: int) -> MvTerm:
    """(px ∧ p((p-1)x)')' — compiles to the function that vanishes exactly
    at 1/p."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    x = Var(1)
    return Neg(Min(Scalar(p, x), Scalar(p, Neg(Scalar(p - 1, x)))))


def point_zero_term(m: int, p: int) -> MvTerm:
    """Composition of the two above: vanishes exactly at m/p."""
    return substitute(unit_zero_term(p), {1: descent_term(m, p)})


# ---------------------------------------------------------------------------
# compilation

PwlFunction = Union[Pwl1, Pwl2]


def compile_term(term: MvTerm, dim: int) -> PwlFunction:
    """Interpret the term in the free algebra on `dim` coordinates."""
    if dim not in (1, 2):
        raise InputError("dimension must be 1 or 2")
    if term.arity() > dim:
        raise InputError(f"term uses x{term.arity()} but dimension is {dim}")
    ops = pwl1 if dim == 1 else pwl2

    def go(t: MvTerm) -> PwlFunction:
        if isinstance(t, Var):
            return Pwl1.identity() if dim == 1 else Pwl2.coordinate(t.index)
        if isinstance(t, Zero):
            return Pwl1.constant(0) if dim == 1 else Pwl2.constant(0)
        if isinstance(t, One):
            return Pwl1.constant(1) if dim == 1 else Pwl2.constant(1)
        if isinstance(t, Neg):
            return ops.mv_neg(go(t.arg))
        if isinstance(t, Scalar):
            return ops.scalar_mul(go(t.arg), t.n)
        assert isinstance(t, _Binary)
        left, right = go(t.left), go(t.right)
        fn = {OPlus: ops.mv_oplus, OTimes: ops.mv_otimes,
              Min: ops.mv_min, Max: ops.mv_max}[type(t)]
        return fn(left, right)

    return go(term)


def apply_term(term: MvTerm, arguments: list[PwlFunction]) -> PwlFunction:
    """Interpret the term with the given functions as the variables (all of
    one arity); compile_term is the special case of coordinate arguments."""
    if not arguments:
        raise InputError("need at least one argument function")
    if term.arity() > len(arguments):
        raise InputError(f"term uses x{term.arity()} but only "
                         f"{len(arguments)} arguments given")
    dims = {1 if isinstance(f, Pwl1) else 2 for f in arguments}
    if len(dims) != 1:
        raise InputError("mixed arities in term application")
    ops = pwl1 if dims.pop() == 1 else pwl2
    one_d = ops is pwl1

    def go(t: MvTerm) -> PwlFunction:
        if isinstance(t, Var):
            return arguments[t.index - 1]
        if isinstance(t, Zero):
            return Pwl1.constant(0) if one_d else Pwl2.constant(0)
        if isinstance(t, One):
            return Pwl1.constant(1) if one_d else Pwl2.constant(1)
        if isinstance(t, Neg):
            return ops.mv_neg(go(t.arg))
        if isinstance(t, Scalar):
            return ops.scalar_mul(go(t.arg), t.n)
        assert isinstance(t, _Binary)
        fn = {OPlus: ops.mv_oplus, OTimes: ops.mv_otimes,
              Min: ops.mv_min, Max: ops.mv_max}[type(t)]
        return fn(go(t.left), go(t.right))

    return go(term)


# ---------------------------------------------------------------------------
# archimedean tests

def is_archimedean(f: PwlFunction) -> bool:
    """Whether some multiple n*f is idempotent.  For continuous functions
    this happens exactly when f is identically zero or bounded away from
    zero (then any n with n*min >= 1 works)."""
    if f.is_constant(0):
        return True
    return f.min_value() > 0


def joint_zero_element(functions: list[PwlFunction],
                       targets: list[tuple[int, int]]) -> PwlFunction:
    """The join of the composed point-zero functions over the given inner
    functions; it vanishes exactly where every a_i hits its target m_i/p_i."""
    if not functions or len(functions) != len(targets):
        raise InputError("need one (m, p) target per function")
    dims = {1 if isinstance(f, Pwl1) else 2 for f in functions}
    if len(dims) != 1:
        raise InputError("mixed arities in joint element")
    dim = dims.pop()
    parts: list[PwlFunction] = []
    for f, (m, p) in zip(functions, targets):
        probe = compile_term(point_zero_term(m, p), 1)
        if dim == 1:
            parts.append(pwl1.compose(probe, f))
        else:
            parts.append(pwl2.compose_after(probe, f))
    out = parts[0]
    ops = pwl1 if dim == 1 else pwl2
    for part in parts[1:]:
        out = ops.mv_max(out, part)
    return out


def fails_archimedean_joint(functions: list[PwlFunction],
                            targets: list[tuple[int, int]]
                            ) -> tuple[bool, Optional[Point]]:
    """Exact form of the joint criterion for continuous functions: the join
    fails to be archimedean iff the target level sets intersect; returns a
    rational witness point of the intersection when they do."""
    if not functions or len(functions) != len(targets):
        raise InputError("need one (m, p) target per function")
    first_dim = 1 if isinstance(functions[0], Pwl1) else 2
    if first_dim == 1:
        common = None
        for f, (m, p) in zip(functions, targets):
            ivs = pwl1.level_intervals(f, Fraction(m, p))
            cplx = pwl1.intervals_to_complex(ivs)
            common = cplx if common is None else complex_intersection(common, cplx)
            if common.is_empty:
                return False, None
        witness = min(v for cell in common.cells for v in cell.vertices)
        return True, witness
    common2: Optional[CellComplex] = None
    for f, (m, p) in zip(functions, targets):
        if not isinstance(f, Pwl2):
            raise InputError("mixed arities in joint element")
        cplx = f.level_set(Fraction(m, p))
        common2 = cplx if common2 is None else complex_intersection(common2, cplx)
        if common2.is_empty:
            return False, None
    witness = min(v for cell in common2.cells for v in cell.vertices)
    return True, witness
