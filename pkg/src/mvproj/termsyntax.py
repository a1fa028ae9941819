"""Concrete syntax for MV-terms.

Grammar (loosest to tightest): ``(+)`` for truncated sum, ``/\\`` and
``\\/`` for lattice meet/join, ``(.)`` for the dual product, prefix ``n*``
for the n-fold sum, postfix ``'`` for negation.  Variables are x1, x2;
constants 0 and 1; whitespace is free.  Example:
``(13*x1 /\\ 13*(12*x1)')'``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .terms import Max, Min, MvTerm, Neg, One, OPlus, OTimes, Scalar, Var, Zero


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[_Token]:
    out = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if src.startswith("(+)", i):
            out.append(_Token("oplus", "(+)", i))
            i += 3
        elif src.startswith("(.)", i):
            out.append(_Token("otimes", "(.)", i))
            i += 3
        elif src.startswith("/\\", i):
            out.append(_Token("min", "/\\", i))
            i += 2
        elif src.startswith("\\/", i):
            out.append(_Token("max", "\\/", i))
            i += 2
        elif ch == "(":
            out.append(_Token("lparen", ch, i))
            i += 1
        elif ch == ")":
            out.append(_Token("rparen", ch, i))
            i += 1
        elif ch == "'":
            out.append(_Token("prime", ch, i))
            i += 1
        elif ch == "*":
            out.append(_Token("star", ch, i))
            i += 1
        elif ch == "x" and i + 1 < n and src[i + 1].isdigit():
            j = i + 1
            while j < n and src[j].isdigit():
                j += 1
            out.append(_Token("var", src[i:j], i))
            i = j
        elif ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            out.append(_Token("num", src[i:j], i))
            i = j
        else:
            raise InputError(f"syntax error at column {i + 1}: unexpected {ch!r}")
    return out


class _Parser:
    def __init__(self, tokens: list[_Token], src: str):
        self.tokens = tokens
        self.src = src
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind: str) -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            where = tok.pos + 1 if tok else len(self.src) + 1
            found = tok.text if tok else "end of input"
            raise InputError(f"syntax error at column {where}: expected {kind}, found {found}")
        self.pos += 1
        return tok

    def expr(self) -> MvTerm:
        node = self.lattice()
        while (tok := self.peek()) and tok.kind == "oplus":
            self.pos += 1
            node = OPlus(node, self.lattice())
        return node

    def lattice(self) -> MvTerm:
        node = self.product()
        while (tok := self.peek()) and tok.kind in ("min", "max"):
            self.pos += 1
            ctor = Min if tok.kind == "min" else Max
            node = ctor(node, self.product())
        return node

    def product(self) -> MvTerm:
        node = self.unary()
        while (tok := self.peek()) and tok.kind == "otimes":
            self.pos += 1
            node = OTimes(node, self.unary())
        return node

    def unary(self) -> MvTerm:
        tok = self.peek()
        if tok and tok.kind == "num" and self.pos + 1 < len(self.tokens) \
                and self.tokens[self.pos + 1].kind == "star":
            self.pos += 2
            n = int(tok.text)
            if n < 1:
                raise InputError(f"syntax error at column {tok.pos + 1}: scalar must be >= 1")
            return Scalar(n, self.unary())
        return self.postfix()

    def postfix(self) -> MvTerm:
        node = self.atom()
        while (tok := self.peek()) and tok.kind == "prime":
            self.pos += 1
            node = Neg(node)
        return node

    def atom(self) -> MvTerm:
        tok = self.peek()
        if tok is None:
            raise InputError(f"syntax error at column {len(self.src) + 1}: "
                             "expected a term, found end of input")
        if tok.kind == "var":
            self.pos += 1
            return Var(int(tok.text[1:]))
        if tok.kind == "num" and tok.text in ("0", "1"):
            self.pos += 1
            return Zero() if tok.text == "0" else One()
        if tok.kind == "lparen":
            self.pos += 1
            node = self.expr()
            self.take("rparen")
            return node
        raise InputError(f"syntax error at column {tok.pos + 1}: unexpected {tok.text!r}")


def parse_term(src: str, arity: int = 2) -> MvTerm:
    """Parse concrete syntax; errors carry the column of the offence."""
    parser = _Parser(_tokenize(src), src)
    term = parser.expr()
    trailing = parser.peek()
    if trailing is not None:
        raise InputError(f"syntax error at column {trailing.pos + 1}: "
                         f"unexpected {trailing.text!r}")
    if term.arity() > arity:
        raise InputError(f"term uses x{term.arity()} but arity is {arity}")
    return term


_LEVEL_OPLUS, _LEVEL_LATTICE, _LEVEL_OTIMES, _LEVEL_UNARY, _LEVEL_ATOM = range(5)


def _print(term: MvTerm, level: int) -> str:
    if isinstance(term, Var):
        return f"x{term.index}"
    if isinstance(term, Zero):
        return "0"
    if isinstance(term, One):
        return "1"
    if isinstance(term, Neg):
        inner = term.arg
        if isinstance(inner, (Var, Zero, One, Neg)):
            text = _print(inner, _LEVEL_ATOM) + "'"
        else:
            text = "(" + _print(inner, _LEVEL_OPLUS) + ")'"
        return text
    if isinstance(term, Scalar):
        arg = term.arg
        if isinstance(arg, (Var, Zero, One, Neg, Scalar)):
            body = _print(arg, _LEVEL_UNARY)
        else:
            body = "(" + _print(arg, _LEVEL_OPLUS) + ")"
        text = f"{term.n}*{body}"
        return text if level <= _LEVEL_UNARY else "(" + text + ")"
    if isinstance(term, OPlus):
        text = _print(term.left, _LEVEL_OPLUS) + " (+) " + _print(term.right, _LEVEL_LATTICE)
        return text if level <= _LEVEL_OPLUS else "(" + text + ")"
    if isinstance(term, (Min, Max)):
        op = " /\\ " if isinstance(term, Min) else " \\/ "
        text = _print(term.left, _LEVEL_LATTICE) + op + _print(term.right, _LEVEL_OTIMES)
        return text if level <= _LEVEL_LATTICE else "(" + text + ")"
    if isinstance(term, OTimes):
        text = _print(term.left, _LEVEL_OTIMES) + " (.) " + _print(term.right, _LEVEL_UNARY)
        return text if level <= _LEVEL_OTIMES else "(" + text + ")"
    raise InputError(f"unknown term node {term!r}")


def print_term(term: MvTerm) -> str:
    """Concrete syntax; parse(print(t)) == t for every tree."""
    return _print(term, _LEVEL_OPLUS)
