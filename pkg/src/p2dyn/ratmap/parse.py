"""Recursive-descent parser for map expressions.

Grammar::

    map     := "[" expr ":" expr ":" expr "]"
    expr    := term { ("+" | "-") term }
    term    := factor { ("*" | "/") factor }
    factor  := ("+" | "-") factor | power
    power   := atom [ ("^" | "**") INT ]
    atom    := NUMBER | "i" | "x" | "y" | "z" | "(" expr ")"

Division is only allowed by a nonzero constant.  Numbers are integers or
decimals (read exactly); ``i`` is the imaginary unit.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Tuple

from ..errors import InvalidLift, ParseError
from ..polyalg.gaussrat import GaussRat, I, ONE
from ..polyalg.hpoly import HPoly, dict_add, dict_mul, dict_pow

Poly = Dict[Tuple[int, int, int], GaussRat]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>\*\*|[-+*/^():\[\]]))"
)

_VARS = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    text = text.replace("−", "-").replace("·", "*")
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse_map(self) -> List[Poly]:
        self.expect("[")
        comps = [self.expr()]
        for _ in range(2):
            self.expect(":")
            comps.append(self.expr())
        self.expect("]")
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos)
        return comps

    def parse_poly(self) -> Poly:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos)
        return p

    def expr(self) -> Poly:
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            acc = dict_add(acc, rhs, sign=1 if op == "+" else -1)
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            rhs = self.factor()
            if op == "*":
                acc = dict_mul(acc, rhs)
            else:
                if set(rhs) - {(0, 0, 0)} or not rhs:
                    raise ParseError("division is only allowed by a nonzero constant", pos)
                inv = rhs[(0, 0, 0)].inverse()
                acc = {e: c * inv for e, c in acc.items()}
        return acc

    def factor(self) -> Poly:
        kind, val, pos = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            inner = self.factor()
            return _neg(inner) if val == "-" else inner
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise ParseError("exponent must be a non-negative integer literal", pos)
            return dict_pow(base, int(val))
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "num":
            c = GaussRat(Fraction(val))
            return {} if c.is_zero() else {(0, 0, 0): c}
        if kind == "name":
            if val in _VARS:
                return {_VARS[val]: ONE}
            if val in ("i", "I"):
                return {(0, 0, 0): I}
            raise ParseError(f"unknown symbol {val!r}", pos)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def _neg(p: Poly) -> Poly:
    return {e: -c for e, c in p.items()}


def parse_polynomial(text: str) -> HPoly:
    """Parse a single homogeneous polynomial."""
    return HPoly(_Parser(text).parse_poly())


def parse_lift(text: str) -> Tuple[HPoly, HPoly, HPoly]:
    """Parse ``[P0 : P1 : P2]`` into three homogeneous components of one degree."""
    comps = _Parser(text).parse_map()
    out = []
    for k, p in enumerate(comps):
        degs = sorted({sum(e) for e in p})
        if len(degs) > 1:
            raise InvalidLift(f"component {k} is not homogeneous (degrees {degs})")
        out.append(HPoly._from_dict(p))
    degs = [f.degree for f in out if not f.is_zero()]
    if not degs:
        raise InvalidLift("all components are zero")
    if len(set(degs)) > 1:
        raise InvalidLift(f"components have different degrees {[f.degree for f in out]}")
    return tuple(out)
