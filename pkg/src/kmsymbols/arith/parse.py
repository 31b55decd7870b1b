"""Expression grammar for field elements.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | '(' expr ')'

Rendering emits the same grammar: monomials in descending graded-lex order,
coefficients in 1..p-1, ``(num)/(den)`` for proper fractions.
"""

from __future__ import annotations

import re

from ..errors import DivisionByZero, ExpressionSyntaxError, UnknownVariable
from .field import FieldSpec
from .poly import Poly
from .ratfunc import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExpressionSyntaxError(f"unexpected character {ch!r}", text, start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, spec):
        self.text = text
        self.spec = spec
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        raise ExpressionSyntaxError(message, self.text, self.tokens[self.i][2])

    def parse(self):
        if self.peek() == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek() != "end":
            self.fail(f"unexpected token {self.tokens[self.i][1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    err = DivisionByZero(f"division by zero at position {pos}")
                    err.position = pos
                    raise err
                value = value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            if self.peek() != "int":
                self.fail("integer exponent expected")
            k = sign * int(self.take()[1])
            if k < 0 and base.is_zero():
                self.fail("negative power of zero")
            base = base ** k
        return base

    def atom(self):
        kind, value, pos = self.tokens[self.i]
        if kind == "int":
            self.take()
            return RatFunc.from_int(self.spec, int(value))
        if kind == "name":
            self.take()
            if value not in self.spec.variables:
                raise UnknownVariable(f"unknown variable {value!r} at position {pos}")
            return RatFunc.variable(self.spec, self.spec.index(value))
        if kind == "(":
            self.take()
            inner = self.expr()
            if self.peek() != ")":
                self.fail("')' expected")
            self.take()
            return inner
        self.fail(f"unexpected token {value!r}" if kind != "end" else "unexpected end of input")


def parse_ratfunc(text: str, spec: FieldSpec) -> RatFunc:
    """Parse ``text`` exactly into an element of ``spec``; integers reduce mod p."""
    return _Parser(text, spec).parse()


def render_poly(f: Poly, names) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append("*".join([str(c)] + factors))
    return " + ".join(parts)


def render_ratfunc(a: RatFunc) -> str:
    names = a.spec.variables
    num = render_poly(a.num, names)
    if a.den.is_one():
        return num
    den = render_poly(a.den, names)
    if len(a.num.terms) > 1:
        num = f"({num})"
    if len(a.den.terms) > 1 or not a.den.is_monomial() or "*" in den:
        den = f"({den})"
    return f"{num}/{den}"
