"""Tiny expression language for catalog objects and ring elements.

Object grammar (case sensitive, whitespace ignored):

    obj  := zero | unit | unit_fp | unit_q
          | shift(obj, INT) | twist(obj, INT)
          | sum(obj, obj) | tensor(obj, obj)
          | cone(elem, obj) | telescope(elem, obj) | telescope_cofiber(elem, obj)
          | push_mod_p(obj) | push_rational(obj)
          | restrict_mod_p(obj) | restrict_rational(obj)

Element grammar: sums of integer-coefficient monomial products in p (the
configured prime) and the generators x1, x2, ..., e.g. "p^2", "3*x1*x2",
"x1 + p".  Elements are parsed over the spec of the object they act on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import algebra as alg
from .algebra import AlgebraSpec
from .errors import EvaluationError

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|-?\d+|[(),*^+])")


def _tokenize(text: str):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise EvaluationError(f"bad token at {text[pos:pos+12]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Stream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise EvaluationError("unexpected end of expression")
        if expected is not None and tok != expected:
            raise EvaluationError(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok


# -- element expressions --------------------------------------------------------

_VAR = re.compile(r"^x(\d+)$")


def _parse_element(stream: _Stream, spec: AlgebraSpec):
    acc = _parse_term(stream, spec)
    while stream.peek() == "+":
        stream.take("+")
        acc = alg.element_add(spec, acc, _parse_term(stream, spec))
    return acc


def _parse_term(stream: _Stream, spec: AlgebraSpec):
    acc = _parse_factor(stream, spec)
    while stream.peek() == "*":
        stream.take("*")
        acc = alg.algebra_mul(spec, acc, _parse_factor(stream, spec))
    return acc


def _parse_factor(stream: _Stream, spec: AlgebraSpec):
    tok = stream.take()
    if tok == "p":
        prime = spec.ring.p
        if prime == 0:
            raise EvaluationError("p has no meaning over the rationals")
        base = alg.scalar_element(spec, spec.ring.from_int(prime))
    elif _VAR.match(tok):
        base = alg.variable_element(spec, int(_VAR.match(tok).group(1)))
    else:
        try:
            base = alg.scalar_element(spec, spec.ring.from_int(int(tok)))
        except ValueError:
            raise EvaluationError(f"unknown element token {tok!r}") from None
    if stream.peek() == "^":
        stream.take("^")
        power = int(stream.take())
        if power < 0:
            raise EvaluationError("negative powers are not ring elements")
        base = alg.element_pow(spec, base, power)
    return base


def parse_element_text(spec: AlgebraSpec, text: str):
    stream = _Stream(_tokenize(text))
    elem = _parse_element(stream, spec)
    if stream.peek() is not None:
        raise EvaluationError(f"trailing input {stream.peek()!r}")
    return elem


# -- object expressions -----------------------------------------------------------

ATOMS = ("zero", "unit", "unit_fp", "unit_q")
UNARY_INT = ("shift", "twist")
BINARY = ("sum", "tensor")
ELEM_OPS = ("cone", "telescope", "telescope_cofiber")
HOME_OPS = ("push_mod_p", "push_rational", "restrict_mod_p", "restrict_rational")


@dataclass(frozen=True)
class Expr:
    """Parsed object expression; args hold Expr children, ints, or element text."""

    head: str
    args: tuple = ()

    def render(self) -> str:
        if not self.args:
            return self.head
        parts = [a.render() if isinstance(a, Expr) else str(a) for a in self.args]
        return f"{self.head}({', '.join(parts)})"


def _parse_expr(stream: _Stream) -> Expr:
    tok = stream.take()
    if tok in ATOMS:
        return Expr(tok)
    if tok in UNARY_INT:
        stream.take("(")
        child = _parse_expr(stream)
        stream.take(",")
        sign = 1
        n = stream.take()
        amount = int(n)
        stream.take(")")
        return Expr(tok, (child, sign * amount))
    if tok in BINARY:
        stream.take("(")
        a = _parse_expr(stream)
        stream.take(",")
        b = _parse_expr(stream)
        stream.take(")")
        return Expr(tok, (a, b))
    if tok in ELEM_OPS:
        stream.take("(")
        elem_tokens = []
        depth = 0
        while True:
            nxt = stream.peek()
            if nxt is None:
                raise EvaluationError("unterminated element argument")
            if nxt == "," and depth == 0:
                break
            if nxt == "(":
                depth += 1
            elif nxt == ")":
                depth -= 1
            elem_tokens.append(stream.take())
        stream.take(",")
        child = _parse_expr(stream)
        stream.take(")")
        return Expr(tok, ("".join(elem_tokens), child))
    if tok in HOME_OPS:
        stream.take("(")
        child = _parse_expr(stream)
        stream.take(")")
        return Expr(tok, (child,))
    raise EvaluationError(f"unknown expression head {tok!r}")


def parse_expression(text: str) -> Expr:
    stream = _Stream(_tokenize(text))
    expr = _parse_expr(stream)
    if stream.peek() is not None:
        raise EvaluationError(f"trailing input {stream.peek()!r}")
    return expr


def canonical(expr: Expr) -> Expr:
    """Sort the arguments of commutative operations so equal constructions
    share one provenance string."""
    if expr.head in BINARY:
        a, b = (canonical(x) for x in expr.args)
        if b.render() < a.render():
            a, b = b, a
        return Expr(expr.head, (a, b))
    args = tuple(canonical(a) if isinstance(a, Expr) else a for a in expr.args)
    return Expr(expr.head, args)
