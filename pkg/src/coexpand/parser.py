"""Recursive-descent parser and printer for the expression grammar.

Grammar (whitespace-insensitive)::

    expr    := term (("+"|"-") term)*
    term    := factor (("*"|"/") factor)*
    factor  := ("-")? base ("^" integer)?
    base    := number | "x" | ident "(" expr ")" | "(" expr ")"
    ident   := "exp"|"log"|"sqrt"|"sin"|"cos"|"tanh"|"atan"|"erf"
    number  := decimal literal, e.g. 2, 0.94, 1e-3
    integer := optionally signed decimal integer

``glue(...)`` never parses from user text; glued trees are built through
the API (or CLI), which validates the hypotheses first.  The printer
still renders them, and an internal reparse mode accepts that output so
printed trees always round-trip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .expr import (
    BUILTINS,
    Add,
    Apply,
    Constant,
    Div,
    FunctionExpr,
    Glue,
    Mul,
    Neg,
    PowInt,
    Sub,
    Variable,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # number | ident | one of - + * / ^ ( ) , | end
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos,
                             frozenset({"number", "identifier", "operator"}))
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        if m.lastgroup == "op":
            tokens.append(_Token(m.group(), m.group(), m.start()))
        else:
            tokens.append(_Token(m.lastgroup, m.group(), m.start()))
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], allow_glue: bool):
        self.tokens = tokens
        self.i = 0
        self.allow_glue = allow_glue

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.offset, frozenset({kind}))
        return self.advance()

    def parse_expr(self) -> FunctionExpr:
        node = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.parse_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self) -> FunctionExpr:
        node = self.parse_factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.parse_factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def parse_factor(self) -> FunctionExpr:
        negated = False
        if self.peek().kind == "-":
            self.advance()
            negated = True
        node = self.parse_base()
        if self.peek().kind == "^":
            self.advance()
            node = PowInt(node, self.parse_integer())
        return Neg(node) if negated else node

    def parse_integer(self) -> int:
        sign = 1
        if self.peek().kind in ("-", "+"):
            sign = -1 if self.advance().kind == "-" else 1
        tok = self.expect("number")
        if not tok.text.isdigit():
            raise ParseError(f"exponent must be an integer, found {tok.text!r}",
                             tok.offset, frozenset({"integer"}))
        return sign * int(tok.text)

    def parse_base(self) -> FunctionExpr:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Constant(float(tok.text))
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            self.advance()
            if tok.text == "x":
                return Variable()
            if tok.text == "glue":
                if not self.allow_glue:
                    raise ParseError("glue(...) is constructed through the API/CLI, not raw text",
                                     tok.offset, frozenset(BUILTINS) | {"x", "number", "("})
                return self.parse_glue()
            if tok.text not in BUILTINS:
                raise ParseError(f"unknown identifier {tok.text!r} (e.g. write exp(x), not e^x)",
                                 tok.offset, frozenset(BUILTINS) | {"x"})
            self.expect("(")
            inner = self.parse_expr()
            self.expect(")")
            return Apply(tok.text, inner)
        raise ParseError(f"expected an expression, found {tok.text or 'end of input'!r}",
                         tok.offset, frozenset({"number", "x", "ident", "(", "-"}))

    def parse_glue(self) -> FunctionExpr:
        # Internal reparse form: glue(left, right) or glue(left, right, arg).
        self.expect("(")
        left = self.parse_expr()
        self.expect(",")
        right = self.parse_expr()
        arg: FunctionExpr = Variable()
        if self.peek().kind == ",":
            self.advance()
            arg = self.parse_expr()
        self.expect(")")
        return Glue(left, right, arg)


def parse(text: str, _allow_glue: bool = False) -> FunctionExpr:
    """Parse expression text into its unique AST."""
    parser = _Parser(_tokenize(text), allow_glue=_allow_glue)
    node = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected trailing input {tail.text!r}", tail.offset, frozenset({"end"}))
    return node


# Precedence levels for the printer: a child rendered at level L is
# parenthesised unless its own level is >= L.
_LVL_EXPR, _LVL_TERM, _LVL_FACTOR, _LVL_BASE = 0, 1, 2, 3


def _level(f: FunctionExpr) -> int:
    match f:
        case Add() | Sub():
            return _LVL_EXPR
        case Mul() | Div():
            return _LVL_TERM
        case Neg() | PowInt():
            return _LVL_FACTOR
        case _:
            return _LVL_BASE


def _number_text(v: float) -> str:
    if v.is_integer() and abs(v) < 1e17:
        return str(int(v))
    return repr(v)


def _render(f: FunctionExpr, level: int) -> str:
    own = _level(f)
    match f:
        case Constant(v):
            s = _number_text(v)
        case Variable():
            s = "x"
        case Add(l, r):
            s = f"{_render(l, _LVL_EXPR)} + {_render(r, _LVL_TERM)}"
        case Sub(l, r):
            s = f"{_render(l, _LVL_EXPR)} - {_render(r, _LVL_TERM)}"
        case Mul(l, r):
            s = f"{_render(l, _LVL_TERM)} * {_render(r, _LVL_FACTOR)}"
        case Div(l, r):
            s = f"{_render(l, _LVL_TERM)} / {_render(r, _LVL_FACTOR)}"
        case Neg(e):
            s = f"-{_render(e, _LVL_BASE)}"
            # A negated factor may carry the exponent outside the parens,
            # so Neg(PowInt(b, n)) prints as -b^n, not -(b^n).
            if isinstance(e, PowInt):
                s = f"-{_render(e.base, _LVL_BASE)}^{e.exponent}"
        case PowInt(b, n):
            s = f"{_render(b, _LVL_BASE)}^{n}"
        case Apply(name, e):
            s = f"{name}({_render(e, _LVL_EXPR)})"
        case Glue(l, r, arg):
            if arg == Variable():
                s = f"glue({_render(l, _LVL_EXPR)}, {_render(r, _LVL_EXPR)})"
            else:
                s = f"glue({_render(l, _LVL_EXPR)}, {_render(r, _LVL_EXPR)}, {_render(arg, _LVL_EXPR)})"
        case _:
            raise TypeError(f"unknown node {f!r}")
    if own < level:
        return f"({s})"
    return s


def format_expr(f: FunctionExpr) -> str:
    """Render a tree to text that reparses to a structurally equal tree.

    Glue nodes render as ``glue(left, right)`` which only the internal
    reparse mode accepts.
    """
    return _render(f, _LVL_EXPR)


def reparse(text: str) -> FunctionExpr:
    """Internal reparse mode: like :func:`parse` but accepts glue(...)."""
    return parse(text, _allow_glue=True)
