"""Parser and evaluator for ring expressions such as ``3/2*o(1) - l(1,2)^2``.

Grammar (whitespace is ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := rational ['*' factor ('*' factor)*]
            | factor ('*' factor)*
    factor := atom ['^' uint]
    atom   := 'o(' uint ')' | 'l(' uint ',' uint ')'
            | 'tau(' uint ',' uint ')' | 'delta(' uint ',' uint ')'
            | '(' expr ')'
    rational := uint ['/' uint]
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .tautoring import (
    RingElement,
    RingParams,
    gen_delta,
    gen_l,
    gen_o,
    gen_tau,
    linear_combination,
    mul,
    one,
    scale,
)

Span = tuple[int, int]

ARITY = {"o": 1, "l": 2, "tau": 2, "delta": 2}
ATOM_START = {"o", "l", "tau", "delta", "("}


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected: set[str] | frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class EvalError(ValueError):
    def __init__(self, message: str, span: Span):
        self.span = span
        super().__init__(f"{message} at offset {span[0]}..{span[1]}")


@dataclass(frozen=True)
class Gen:
    name: str
    args: tuple[int, ...]
    span: Span


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int
    span: Span


@dataclass(frozen=True)
class Product:
    coef: Fraction
    factors: tuple["Node", ...]
    span: Span


@dataclass(frozen=True)
class Sum:
    terms: tuple[tuple[int, Product], ...]  # (sign, term)
    span: Span


Node = Union[Gen, Power, Product, Sum]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\S))")


@dataclass
class _Tok:
    kind: str  # "int", "name", or the punctuation character itself, "eof"
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(src, pos)
        if not m:
            break
        if m.group(1):
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), m.start(2)))
        elif m.group(3):
            toks.append(_Tok(m.group(3), m.group(3), m.start(3)))
        pos = m.end()
    end = len(src.rstrip())
    toks.append(_Tok("eof", "", end))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind: str, expected: set[str] | None = None) -> _Tok:
        if self.tok.kind != kind:
            self.fail(expected or {repr(kind)})
        return self.advance()

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.pos, set(expected))

    def parse(self) -> Sum:
        node = self.expr()
        if self.tok.kind != "eof":
            self.fail({"'+'", "'-'", "'*'", "end of input"})
        return node

    def expr(self) -> Sum:
        start = self.tok.pos
        sign = 1
        if self.tok.kind in ("+", "-"):
            sign = -1 if self.advance().kind == "-" else 1
        terms = [(sign, self.term())]
        while self.tok.kind in ("+", "-"):
            sign = -1 if self.advance().kind == "-" else 1
            terms.append((sign, self.term()))
        return Sum(tuple(terms), (start, self.toks[self.i - 1].pos + len(self.toks[self.i - 1].text)))

    def uint(self) -> int:
        return int(self.expect("int", {"unsigned integer"}).text)

    def index(self) -> int:
        t = self.tok
        v = self.uint()
        if v == 0:
            raise ParseError("indices start at 1", t.pos, {"positive integer"})
        return v

    def term(self) -> Product:
        start = self.tok.pos
        coef = Fraction(1)
        factors = []
        if self.tok.kind == "int":
            num = self.uint()
            den = 1
            if self.tok.kind == "/":
                self.advance()
                t = self.tok
                den = self.uint()
                if den == 0:
                    raise ParseError("zero denominator", t.pos, {"positive integer"})
            coef = Fraction(num, den)
            if self.tok.kind != "*":
                return Product(coef, (), (start, self._end()))
            self.advance()
            factors.append(self.factor())
        else:
            factors.append(self.factor())
        while self.tok.kind == "*":
            self.advance()
            factors.append(self.factor())
        return Product(coef, tuple(factors), (start, self._end()))

    def _end(self) -> int:
        t = self.toks[self.i - 1]
        return t.pos + len(t.text)

    def factor(self) -> Node:
        start = self.tok.pos
        node = self.atom()
        if self.tok.kind == "^":
            self.advance()
            node = Power(node, self.uint(), (start, self._end()))
        return node

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")", {"')'"})
            return inner
        if t.kind == "name" and t.text in ARITY:
            self.advance()
            self.expect("(", {"'('"})
            args = [self.index()]
            for _ in range(ARITY[t.text] - 1):
                self.expect(",", {"','"})
                args.append(self.index())
            self.expect(")", {"')'"})
            return Gen(t.text, tuple(args), (t.pos, self._end()))
        self.fail({repr(a) for a in ATOM_START})


def parse_expr(src: str) -> Sum:
    return _Parser(src).parse()


def eval_expr(node: Node, p: RingParams) -> RingElement:
    if isinstance(node, Gen):
        try:
            if node.name == "o":
                return gen_o(p, *node.args)
            if node.name == "l":
                return gen_l(p, *node.args)
            if node.name == "tau":
                return gen_tau(p, *node.args)
            return gen_delta(p, *node.args)
        except (IndexError, ValueError) as exc:
            raise EvalError(str(exc), node.span) from None
    if isinstance(node, Power):
        base = eval_expr(node.base, p)
        result = one(p)
        for _ in range(node.exponent):
            result = mul(result, base)
        return result
    if isinstance(node, Product):
        result = scale(node.coef, one(p))
        for f in node.factors:
            result = mul(result, eval_expr(f, p))
        return result
    return linear_combination(p, ((sign, eval_expr(t, p)) for sign, t in node.terms))


def evaluate(src: str, p: RingParams) -> RingElement:
    return eval_expr(parse_expr(src), p)
