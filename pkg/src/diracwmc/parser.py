"""Concrete syntax for Dirac expressions.

Grammar (``kron`` binds tightest, then ``*``, then ``+``; all left-assoc)::

    program := ("let" NAME "=" expr ";")* expr [";"]
    expr    := mul ("+" mul)*
    mul     := kterm ("*" kterm)*
    kterm   := atom ("kron" atom)*
    atom    := NUMBER | "bra(" i "," q ")" | "ket(" i "," q ")" | "tr(" expr ")"
             | "entry(" i "," j "," expr ")" | "trans(" expr ")" | "conj(" expr ")"
             | "apply(" ("id" | "conj") "," expr ")" | NAME | "(" expr ")"

Numbers are real (``3``, ``-1.5e2``), imaginary (``2i``) or complex written
without spaces (``2+3i``, ``1.5-0.5i``).  ``*`` and ``+`` resolve to the scalar
or matrix node from the sorts of their operands.  ``#`` starts a comment.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping

from .errors import DiracSyntaxError, DiracTypeError
from .lang import (
    CONJUGATE,
    IDENTITY,
    Apply,
    Bra,
    Const,
    Entry,
    Expr,
    Ket,
    Kron,
    MatAdd,
    MatMul,
    SAdd,
    ScalMul,
    SMul,
    Trace,
    Trans,
    add,
    mul,
)

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(
    rf"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>-?{_NUM}(?:[+-]{_NUM}[ij]|[ij])?(?![A-Za-z_0-9]))
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*(),;=])
    """,
    re.VERBOSE,
)
_COMPLEX = re.compile(rf"^(?P<re>-?{_NUM})(?:(?P<im>[+-]{_NUM})[ij])?$|^(?P<pure>-?{_NUM})[ij]$")

KEYWORDS = {"bra", "ket", "tr", "entry", "trans", "conj", "apply", "kron", "let", "id"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DiracSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _number(text: str) -> complex:
    m = _COMPLEX.match(text)
    if m.group("pure") is not None:
        return complex(0.0, float(m.group("pure")))
    im = m.group("im")
    return complex(float(m.group("re")), float(im) if im else 0.0)


class _Parser:
    def __init__(self, text: str, env: Mapping[str, Expr] | None):
        self.toks = tokenize(text)
        self.i = 0
        self.env = dict(env or {})

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return DiracSyntaxError(msg, tok.line, tok.column)

    def accept(self, text: str) -> Token | None:
        if self.tok.text == text and self.tok.kind in ("op", "name"):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    def integer(self) -> int:
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise self.error(f"expected a nonnegative integer, found {t.text or 'end of input'!r}")
        self.i += 1
        return int(t.text)

    def program(self) -> Expr:
        while self.tok.text == "let" and self.tok.kind == "name":
            self.i += 1
            name = self.tok
            if name.kind != "name" or name.text in KEYWORDS:
                raise self.error("expected a binding name")
            self.i += 1
            self.expect("=")
            self.env[name.text] = self.expr()
            self.expect(";")
        e = self.expr()
        self.accept(";")
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def _combine(self, fn, a: Expr, b: Expr, tok: Token) -> Expr:
        try:
            return fn(a, b)
        except DiracTypeError as exc:
            raise DiracTypeError(f"line {tok.line}, column {tok.column}: {exc.message}", exc.rule) from None

    def expr(self) -> Expr:
        e = self.mul()
        while True:
            t = self.accept("+")
            if t is None:
                return e
            e = self._combine(add, e, self.mul(), t)

    def mul(self) -> Expr:
        e = self.kterm()
        while True:
            t = self.accept("*")
            if t is None:
                return e
            e = self._combine(mul, e, self.kterm(), t)

    def kterm(self) -> Expr:
        e = self.atom()
        while self.accept("kron"):
            e = Kron(e, self.atom())
        return e

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Const(_number(t.text))
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if t.kind != "name":
            raise self.error(f"unexpected {t.text or 'end of input'!r}")
        self.i += 1
        word = t.text
        if word in ("bra", "ket"):
            self.expect("(")
            i = self.integer()
            self.expect(",")
            q = self.integer()
            self.expect(")")
            return Bra(i, q) if word == "bra" else Ket(i, q)
        if word in ("tr", "trans", "conj"):
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return {"tr": Trace, "trans": Trans}[word](e) if word != "conj" else Apply(CONJUGATE, e)
        if word == "entry":
            self.expect("(")
            i = self.integer()
            self.expect(",")
            j = self.integer()
            self.expect(",")
            e = self.expr()
            self.expect(")")
            return Entry(i, j, e)
        if word == "apply":
            self.expect("(")
            f = self.tok
            if f.text not in (IDENTITY, CONJUGATE):
                raise self.error("expected 'id' or 'conj'")
            self.i += 1
            self.expect(",")
            e = self.expr()
            self.expect(")")
            return Apply(f.text, e)
        if word in KEYWORDS:
            raise self.error(f"unexpected keyword {word!r}", t)
        if word not in self.env:
            raise self.error(f"unbound name {word!r}", t)
        return self.env[word]


def parse(text: str, env: Mapping[str, Expr] | None = None) -> Expr:
    """Parse a single expression (``let`` bindings are accepted as well)."""
    return _Parser(text, env).program()


parse_program = parse


# -- printing --------------------------------------------------------------

_ADD, _MUL, _KRON, _ATOM = 1, 2, 3, 4


def _float_text(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot print non-finite constant {x}")
    return repr(float(x))


def format_const(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return _float_text(z.real)
    if z.real == 0 and math.copysign(1.0, z.real) > 0:
        return _float_text(z.imag) + "i"
    im = _float_text(z.imag)
    return _float_text(z.real) + ("" if im.startswith("-") else "+") + im + "i"


def _prec(e: Expr) -> int:
    if isinstance(e, (SAdd, MatAdd)):
        return _ADD
    if isinstance(e, (SMul, MatMul, ScalMul)):
        return _MUL
    if isinstance(e, Kron):
        return _KRON
    return _ATOM


def to_text(e: Expr) -> str:
    """Print ``e`` so that :func:`parse` gives back an equal tree."""

    def wrap(child: Expr, minimum: int) -> str:
        s = go(child)
        return f"({s})" if _prec(child) < minimum else s

    def go(e: Expr) -> str:
        if isinstance(e, Const):
            return format_const(e.value)
        if isinstance(e, Bra):
            return f"bra({e.i}, {e.q})"
        if isinstance(e, Ket):
            return f"ket({e.i}, {e.q})"
        if isinstance(e, Trace):
            return f"tr({go(e.arg)})"
        if isinstance(e, Trans):
            return f"trans({go(e.arg)})"
        if isinstance(e, Entry):
            return f"entry({e.i}, {e.j}, {go(e.arg)})"
        if isinstance(e, Apply):
            return f"conj({go(e.arg)})" if e.f == CONJUGATE else f"apply(id, {go(e.arg)})"
        if isinstance(e, ScalMul):
            return f"{wrap(e.scalar, _MUL)} * {wrap(e.arg, _MUL + 1)}"
        p = _prec(e)
        sym = {_ADD: "+", _MUL: "*", _KRON: "kron"}[p]
        return f"{wrap(e.left, p)} {sym} {wrap(e.right, p + 1)}"

    return go(e)


__all__ = ["KEYWORDS", "format_const", "parse", "parse_program", "to_text", "tokenize"]
