"""Finite Łukasiewicz chains and the partial descent map on them.

The chain with n+1 elements is {0, 1/n, ..., 1}.  The descent map sends a
to (r*a)' where r is the unique positive integer with r*a < 1 <= (r+1)*a;
it is undefined at 0 and 1.  An element is a cyclic generator when some
iterate reaches 1/n.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InputError
from .rationals import is_prime


@dataclass(frozen=True)
class ChainElement:
    """i/n inside the chain with n+1 elements (i not reduced mod gcd)."""

    i: int
    n: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.i <= self.n:
            raise InputError(f"not a chain element: {self.i}/{self.n}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.i, self.n)

    def __str__(self) -> str:
        return f"{self.i}/{self.n}"


def t_step(a: ChainElement) -> Optional[tuple[ChainElement, int]]:
    """One descent step with its multiplier r, or None where undefined."""
    if a.i == 0 or a.i == a.n:
        return None
    r = -(-a.n // a.i) - 1  # ceil(n / i) - 1
    assert r >= 1 and r * a.i < a.n <= (r + 1) * a.i
    return ChainElement(a.n - r * a.i, a.n), r


def orbit(a: ChainElement) -> tuple[list[ChainElement], list[int], Optional[int]]:
    """Iterate the descent map from a.

    Returns (visited elements starting at a, multipliers used, k) where k is
    the smallest iterate count reaching 1/n, or None when the orbit stalls
    (undefined step) or cycles first.
    """
    path = [a]
    multipliers: list[int] = []
    seen = {a.i}
    cur = a
    for step in range(a.n + 1):
        if cur.i == 1:
            return path, multipliers, step
        nxt = t_step(cur)
        if nxt is None:
            return path, multipliers, None
        cur, r = nxt
        if cur.i in seen:
            path.append(cur)
            multipliers.append(r)
            return path, multipliers, None
        seen.add(cur.i)
        path.append(cur)
        multipliers.append(r)
    return path, multipliers, None


def is_cyclic_generator(a: ChainElement) -> Optional[int]:
    """Smallest k >= 0 with t^k(a) = 1/n, or None."""
    return orbit(a)[2]


def multipliers(m: int, p: int) -> list[int]:
    """The descent multipliers along the orbit of m/p down to 1/p.

    Requires 0 < m < p with p prime (so the orbit always reaches 1/p);
    empty for m = 1.
    """
    if not 0 < m < p:
        raise InputError(f"need 0 < m < p, got m={m}, p={p}")
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    path, mults, k = orbit(ChainElement(m, p))
    if k is None:
        raise InputError(f"orbit of {m}/{p} does not reach 1/{p}")
    return mults


def format_orbit(m: int, p: int) -> str:
    """"m/p -> ... -> 1/p  [k = ..., multipliers = ...]" for the CLI."""
    path, mults, k = orbit(ChainElement(m, p))
    arrow = " -> ".join(str(e) for e in path)
    if k is None:
        return f"{arrow}  [no cyclic generation: orbit stalls or cycles]"
    return f"{arrow}  [k = {k}, multipliers = {mults}]"
