"""Truncated polynomial algebras k[x1, x2, ...]/(x_i^{n_i}) with deg x_i = 2^i.

The infinite-variable ring is never materialized: every operation is bounded
by an internal degree, and only the finitely many generators whose degree fits
under that bound can occur.  Monomials are sparse exponent vectors; elements
are finite monomial-to-scalar maps with no zero coefficients stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import SpecMismatch
from .scalars import CoefficientRing, Scalar

# Monomial: tuple of (variable index >= 1, exponent >= 1), sorted by variable.
Monomial = tuple
UNIT_MONOMIAL: Monomial = ()


@dataclass(frozen=True)
class AlgebraSpec:
    """Coefficients plus the truncation-exponent and degree rules.

    Both rules are an explicit finite prefix extended by a default: exponent
    default n, degree default 2^i.  The degree rule must be strictly
    increasing, which is what makes every degree window finite.
    """

    ring: CoefficientRing
    exponent_prefix: tuple = ()
    exponent_default: int = 2
    degree_prefix: tuple = ()

    def __post_init__(self):
        if self.exponent_default < 2 or any(n < 2 for n in self.exponent_prefix):
            raise ValueError("truncation exponents must be at least 2")
        degs = list(self.degree_prefix) + [
            2 ** (len(self.degree_prefix) + 1 + k) for k in range(2)
        ]
        if any(d < 1 for d in degs):
            raise ValueError("generator degrees must be positive")
        if any(a >= b for a, b in zip(degs, degs[1:])):
            raise ValueError("generator degrees must be strictly increasing")

    def exponent(self, i: int) -> int:
        """Truncation exponent n_i of x_i (variables are 1-indexed)."""
        if i <= len(self.exponent_prefix):
            return self.exponent_prefix[i - 1]
        return self.exponent_default

    def degree(self, i: int) -> int:
        if i <= len(self.degree_prefix):
            return self.degree_prefix[i - 1]
        return 2 ** i

    def with_ring(self, ring: CoefficientRing) -> "AlgebraSpec":
        return AlgebraSpec(ring, self.exponent_prefix, self.exponent_default,
                           self.degree_prefix)

    def same_rules(self, other: "AlgebraSpec") -> bool:
        return (self.exponent_prefix == other.exponent_prefix
                and self.exponent_default == other.exponent_default
                and self.degree_prefix == other.degree_prefix)


def monomial_degree(spec: AlgebraSpec, m: Monomial) -> int:
    return sum(e * spec.degree(i) for i, e in m)


def monomial_mul(spec: AlgebraSpec, a: Monomial, b: Monomial):
    """Product monomial, or None when a truncation relation kills it."""
    exps = dict(a)
    for i, e in b:
        exps[i] = exps.get(i, 0) + e
        if exps[i] >= spec.exponent(i):
            return None
    return tuple(sorted(exps.items()))


def required_variables(spec: AlgebraSpec, window_hi: int,
                       min_gen_degree: int) -> int:
    """Largest m with deg(x_m) <= window_hi - min_gen_degree.

    Inside a window topped at window_hi, no computation whose generators sit
    at internal degree >= min_gen_degree can involve x_i for i > m, so window
    results are exact for the full infinite-variable ring.
    """
    if window_hi < min_gen_degree:
        raise ValueError("window_hi must be at least min_gen_degree")
    budget = window_hi - min_gen_degree
    m = 0
    while spec.degree(m + 1) <= budget:
        m += 1
    return m


@lru_cache(maxsize=None)
def monomial_basis(spec: AlgebraSpec, d: int) -> tuple:
    """All monomials of internal degree d, in lexicographic order on
    exponent vectors (x1 exponent first)."""
    if d < 0:
        return ()
    if d == 0:
        return (UNIT_MONOMIAL,)
    nvars = required_variables(spec, d, 0)
    out = []

    def rec(i: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(tuple((v, e) for v, e in acc if e))
            return
        if i > nvars:
            return
        deg = spec.degree(i)
        max_e = min(spec.exponent(i) - 1, remaining // deg)
        for e in range(0, max_e + 1):
            acc.append((i, e))
            rec(i + 1, remaining - e * deg, acc)
            acc.pop()

    rec(1, d, [])
    return tuple(out)


# An algebra element is a sorted tuple of (monomial, nonzero scalar) terms.
Element = tuple
ZERO_ELEMENT: Element = ()


def element_from_terms(spec: AlgebraSpec, terms) -> Element:
    acc = {}
    for m, c in terms:
        c = spec.ring.check(c)
        if c == 0:
            continue
        if m in acc:
            s = spec.ring.add(acc[m], c)
            if s == 0:
                del acc[m]
            else:
                acc[m] = s
        else:
            acc[m] = c
    for m in acc:
        for i, e in m:
            if e <= 0 or e >= spec.exponent(i):
                raise ValueError(f"illegal exponent {e} for x{i}")
    return tuple(sorted(acc.items()))


def scalar_element(spec: AlgebraSpec, c: Scalar) -> Element:
    return element_from_terms(spec, [(UNIT_MONOMIAL, c)])


def one_element(spec: AlgebraSpec) -> Element:
    return scalar_element(spec, spec.ring.one())


def variable_element(spec: AlgebraSpec, i: int, power: int = 1) -> Element:
    if power == 0:
        return one_element(spec)
    if power >= spec.exponent(i):
        return ZERO_ELEMENT
    return element_from_terms(spec, [(((i, power),), spec.ring.one())])


def element_add(spec: AlgebraSpec, a: Element, b: Element) -> Element:
    return element_from_terms(spec, list(a) + list(b))


def element_neg(spec: AlgebraSpec, a: Element) -> Element:
    return tuple((m, spec.ring.neg(c)) for m, c in a)


def element_scale(spec: AlgebraSpec, c: Scalar, a: Element) -> Element:
    return element_from_terms(spec, [(m, spec.ring.mul(c, x)) for m, x in a])


def algebra_mul(spec: AlgebraSpec, a: Element, b: Element) -> Element:
    """Distributed product; monomials hitting a truncation exponent drop out.

    All generators live in even degree, so the product is commutative with no
    sign bookkeeping.
    """
    terms = []
    for m1, c1 in a:
        for m2, c2 in b:
            m = monomial_mul(spec, m1, m2)
            if m is not None:
                terms.append((m, spec.ring.mul(c1, c2)))
    return element_from_terms(spec, terms)


def element_pow(spec: AlgebraSpec, a: Element, n: int) -> Element:
    out = one_element(spec)
    for _ in range(n):
        out = algebra_mul(spec, out, a)
    return out


def element_degree(spec: AlgebraSpec, a: Element):
    """Internal degree of a homogeneous element; None for 0, error if mixed."""
    if not a:
        return None
    degs = {monomial_degree(spec, m) for m, _ in a}
    if len(degs) > 1:
        raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
    return degs.pop()


def is_homogeneous(spec: AlgebraSpec, a: Element) -> bool:
    return len({monomial_degree(spec, m) for m, _ in a}) <= 1


def check_same_spec(a: AlgebraSpec, b: AlgebraSpec):
    if a != b:
        raise SpecMismatch(f"{a} vs {b}")


# -- coefficient maps on elements ---------------------------------------------

def element_map_coefficients(spec_to: AlgebraSpec, a: Element, fn) -> Element:
    return element_from_terms(spec_to, [(m, fn(c)) for m, c in a])


def element_reduce_mod_p(src: AlgebraSpec, a: Element) -> Element:
    """Z_(p) coefficients to F_p residues."""
    tgt = src.with_ring(src.ring.residue_ring())
    return element_map_coefficients(tgt, a, src.ring.reduce_mod_p)


def element_lift_mod_p(src: AlgebraSpec, a: Element,
                       tgt: AlgebraSpec) -> Element:
    """F_p coefficients to their canonical representatives in [0, p)."""
    return element_map_coefficients(tgt, a, tgt.ring.lift_from_fp)


def element_rationalize(src: AlgebraSpec, a: Element) -> Element:
    tgt = src.with_ring(CoefficientRing.rational())
    return element_map_coefficients(tgt, a, lambda c: c)


# -- rendering and parsing -----------------------------------------------------

def render_scalar(c: Scalar) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def render_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in m)


def render_element(a: Element) -> str:
    if not a:
        return "0"
    parts = []
    for m, c in a:
        cs = render_scalar(c)
        if m:
            parts.append(f"{cs}*{render_monomial(m)}")
        else:
            parts.append(cs)
    return " + ".join(parts)


def parse_element(spec: AlgebraSpec, text: str) -> Element:
    """Inverse of render_element; also accepts the symbol p for the prime."""
    from .catalog_expr import parse_element_text  # local import, no cycle at load

    return parse_element_text(spec, text)
