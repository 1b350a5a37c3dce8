"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr     := [sign] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' natural)?
    atom     := rational | identifier | '(' expr ')'
    rational := integer ('/' positive-integer)?

Juxtaposition is not multiplication: ``2u`` and ``u v`` are errors.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple, Sequence

from .polys import MPoly

__all__ = ["ParseError", "parse_poly", "parse_rational"]

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.)", re.S)
_OPS = "+-*/^()"
MAX_EXPONENT = 1000


class ParseError(ValueError):
    def __init__(self, message: str, src: str, pos: int):
        self.pos = pos
        self.line = src.count("\n", 0, pos) + 1
        self.column = pos - (src.rfind("\n", 0, pos) + 1) + 1
        self.message = message
        super().__init__(f"line {self.line}, column {self.column}: {message}")


class _Tok(NamedTuple):
    kind: str  # "int", "ident", "op", "end"
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), pos))
        elif m.group(2) is not None:
            toks.append(_Tok("ident", m.group(2), pos))
        elif m.group(3) in _OPS:
            toks.append(_Tok("op", m.group(3), pos))
        else:
            raise ParseError(f"unexpected character {m.group(3)!r}", src, pos)
        pos = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str, variables: Sequence[str]):
        self.src = src
        self.vars = tuple(variables)
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(message, self.src, tok.pos)

    def parse(self) -> MPoly:
        if self.peek().kind == "end":
            self.error("empty expression")
        out = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            if tok.kind in ("int", "ident") or tok.text == "(":
                self.error("implicit multiplication is not allowed; use '*'")
            self.error(f"unexpected {tok.text!r}")
        return out

    def expr(self) -> MPoly:
        sign = 1
        if self.peek().text in ("+", "-") and self.peek().kind == "op":
            sign = -1 if self.take().text == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MPoly:
        acc = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> MPoly:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            tok = self.take()
            if tok.kind != "int":
                self.error("exponent must be a non-negative integer", tok)
            if int(tok.text) > MAX_EXPONENT:
                self.error(f"exponent exceeds {MAX_EXPONENT}", tok)
            return base ** int(tok.text)
        return base

    def atom(self) -> MPoly:
        tok = self.take()
        if tok.kind == "int":
            value = Fraction(int(tok.text))
            if self.peek().kind == "op" and self.peek().text == "/":
                self.take()
                den = self.take()
                if den.kind != "int" or int(den.text) == 0:
                    self.error("denominator must be a positive integer", den)
                value /= int(den.text)
            return MPoly.const(self.vars, value)
        if tok.kind == "ident":
            if tok.text not in self.vars:
                self.error(f"unknown identifier {tok.text!r}", tok)
            return MPoly.var(self.vars, tok.text)
        if tok.text == "(":
            inner = self.expr()
            close = self.take()
            if close.text != ")":
                self.error("expected ')'", close)
            return inner
        if tok.kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected {tok.text!r}", tok)


def parse_poly(src: str, variables: Sequence[str]) -> MPoly:
    """Parse ``src`` into a polynomial in ``variables``."""
    if not isinstance(src, str):
        raise ParseError("expression must be a string", str(src), 0)
    return _Parser(src, variables).parse()


def parse_rational(src) -> Fraction:
    """A rational constant written as an int or with the expression grammar."""
    if isinstance(src, int) and not isinstance(src, bool):
        return Fraction(src)
    p = parse_poly(str(src), ())
    if p.degree() > 0:
        raise ParseError("expected a constant", str(src), 0)
    return p.constant_term()
