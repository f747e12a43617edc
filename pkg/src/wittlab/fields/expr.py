"""Tokenizer and recursive-descent parser for field-element expressions.

Grammar (usual precedence, ``^`` and ``**`` both mean power)::

    sum    := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom (('^' | '**') unary)?
    atom   := INT | NAME | '(' sum ')'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from ..errors import ParseError

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[^\W\d]\w*)|(?P<op>\*\*|<<|>>|[-+*/^(),<>=.;]))",
    re.UNICODE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "name" | "op" | "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", text, pos)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExprParser:
    """Parses element expressions; subclasses add form-level syntax.

    ``resolve`` maps a name to an element, ``const`` maps a Python int to one.
    """

    def __init__(self, text: str, resolve: Callable, const: Callable):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.resolve = resolve
        self.const = const

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, self.text, tok.pos)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            self.error(f"expected {text!r}")
        return tok

    def expect_name(self) -> str:
        tok = self.tok
        if tok.kind != "name":
            self.error("expected a name")
        self.i += 1
        return tok.text

    def finish(self):
        if self.tok.kind != "end":
            self.error("unexpected trailing input")

    # element grammar
    def parse_sum(self):
        value = self.parse_term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self):
        value = self.parse_unary()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.tok.text
            self.i += 1
            rhs = self.parse_unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def parse_unary(self):
        if self.accept("-"):
            return -self.parse_unary()
        if self.accept("+"):
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.tok.kind == "op" and self.tok.text in ("^", "**"):
            self.i += 1
            sign = -1 if self.accept("-") else 1
            tok = self.tok
            if tok.kind != "num":
                self.error("exponent must be an integer literal")
            self.i += 1
            return base ** (sign * int(tok.text))
        return base

    def parse_atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return self.const(int(tok.text))
        if tok.kind == "name":
            self.i += 1
            return self.resolve(tok.text, tok)
        if self.accept("("):
            value = self.parse_sum()
            self.expect(")")
            return value
        self.error("expected a number, a name or '('")
