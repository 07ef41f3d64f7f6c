"""Derived base change along the mod-p projection and the rationalization.

Two ring maps out of the p-local algebra are supported: the projection onto
mod-p coefficients and the inclusion into rational coefficients.  Extension of
scalars acts coefficient-wise on the differentials of a free complex, which is
already the derived functor because free complexes are cofibrant.  The right
adjoints are realized explicitly so that everything downstream stays in the
free-complex regime:

* restriction along the projection produces a free p-local complex with
  generators doubled: lift the differential entry-wise to representatives in
  [0, p), add a p-times-identity block, and correct with the exactly divisible
  square of the lift (lift(d)^2 is divisible by p because d^2 = 0 mod p).
  The corrected double complex is always quasi-isomorphic to the underlying
  p-local complex: its kernel against the reduction map is contractible.

* restriction along the rationalization is an ind-object: scale generators so
  the differential entries become p-local, then form the telescope of
  multiplication by p on the resulting integral model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import algebra as alg
from . import complexes as cx
from .algebra import AlgebraSpec
from .complexes import ChainMap, DegreeWindow, FreeComplex, IndComplex
from .errors import NonPLocalInput, SpecMismatch
from .scalars import FP, P_LOCAL, RATIONAL, CoefficientRing

MOD_P = "mod_p"
RATIONALIZE = "rationalize"


@dataclass(frozen=True)
class RingMapTag:
    """A supported ring map between truncated algebras with shared rules.

    kind 'mod_p' is the coefficient projection Z_(p) -> F_p, 'rationalize' the
    inclusion Z_(p) -> Q, and 'generic' any coefficient map with the identity
    generator pattern; only the first two carry verified semantics.
    """

    kind: str
    source: AlgebraSpec
    target: AlgebraSpec

    def __post_init__(self):
        if not self.source.same_rules(self.target):
            raise SpecMismatch("ring maps must preserve exponent/degree rules")
        if self.kind == MOD_P:
            if self.source.ring.kind != P_LOCAL or self.target.ring.kind != FP:
                raise SpecMismatch("mod_p map needs Z_(p) source and F_p target")
            if self.source.ring.p != self.target.ring.p:
                raise SpecMismatch("mod_p map must preserve the prime")
        elif self.kind == RATIONALIZE:
            if self.source.ring.kind != P_LOCAL or self.target.ring.kind != RATIONAL:
                raise SpecMismatch("rationalize map needs Z_(p) source, Q target")
        elif self.kind != "generic":
            raise ValueError(f"unknown ring map kind {self.kind!r}")

    def coefficient_map(self):
        src = self.source.ring
        if self.kind == MOD_P:
            return src.reduce_mod_p
        if self.kind == RATIONALIZE:
            return lambda c: c
        raise ValueError("generic maps need an explicit coefficient map")


def mod_p_map(spec: AlgebraSpec) -> RingMapTag:
    if spec.ring.kind != P_LOCAL:
        raise NonPLocalInput("source must be p-local")
    return RingMapTag(MOD_P, spec, spec.with_ring(spec.ring.residue_ring()))


def rationalize_map(spec: AlgebraSpec) -> RingMapTag:
    if spec.ring.kind != P_LOCAL:
        raise NonPLocalInput("source must be p-local")
    return RingMapTag(RATIONALIZE, spec, spec.with_ring(CoefficientRing.rational()))


def extend_scalars(rm: RingMapTag, x):
    """Derived extension of scalars: same generators, coefficients mapped.

    Accepts a FreeComplex, ChainMap or IndComplex; ind-objects are transformed
    stage rule by stage rule.
    """
    if isinstance(x, IndComplex):
        return _extend_ind(rm, x)
    if isinstance(x, ChainMap):
        return ChainMap(
            extend_scalars(rm, x.source),
            extend_scalars(rm, x.target),
            _map_blocks(rm, x.blocks),
        )
    if x.spec != rm.source:
        raise SpecMismatch("complex is not over the map's source")
    return FreeComplex(rm.target, x.generators, _map_blocks(rm, x.differentials))


def _map_blocks(rm: RingMapTag, blocks):
    fn = rm.coefficient_map()
    out = []
    for c, entries in blocks:
        mapped = []
        for i, j, f in entries:
            g = alg.element_map_coefficients(rm.target, f, fn)
            if g:
                mapped.append((i, j, g))
        if mapped:
            out.append((c, tuple(mapped)))
    return tuple(out)


def _map_element(rm: RingMapTag, f):
    return alg.element_map_coefficients(rm.target, f, rm.coefficient_map())


def _extend_ind(rm: RingMapTag, ind: IndComplex) -> IndComplex:
    if ind.kind == "constant":
        return cx.constant_ind(extend_scalars(rm, ind.base))
    if ind.kind == "telescope":
        return cx.telescope(extend_scalars(rm, ind.base),
                            extend_scalars(rm, ind.phi))
    if ind.kind == "tel_cofiber":
        return cx.telescope_cofiber(_map_element(rm, ind.element),
                                    extend_scalars(rm, ind.base))
    if ind.kind == "shift":
        return cx.ind_shift(_extend_ind(rm, ind.left), ind.offset)
    if ind.kind in ("tensor", "sum"):
        left = extend_scalars(rm, ind.left)
        right = extend_scalars(rm, ind.right)
        maker = cx.ind_tensor if ind.kind == "tensor" else cx.ind_sum
        return maker(left, right)
    raise ValueError(ind.kind)


# -- restriction along the mod-p projection ------------------------------------


def restrict_mod_p(x: FreeComplex) -> FreeComplex:
    """Underlying p-local complex of a mod-p complex, as a free complex.

    Generators at chain c are the mod-p generators at c plus those at c - 1.
    With L the entry-wise [0, p) lift of the differential, the block form is

        [[L, p id], [-L^2/p, -L]]

    whose square vanishes identically, so the d о d audit in the complex
    constructor certifies the compensation exactly.
    """
    if x.spec.ring.kind != FP:
        raise SpecMismatch("restrict_mod_p expects a mod-p complex")
    p = x.spec.ring.p
    tgt_spec = x.spec.with_ring(CoefficientRing.p_local(p))
    lift = {
        c: tuple(
            (i, j, alg.element_lift_mod_p(x.spec, f, tgt_spec))
            for i, j, f in entries
        )
        for c, entries in x.differentials
    }

    chains = sorted({c for c, _ in x.generators}
                    | {c + 1 for c, _ in x.generators})
    gens = {c: tuple(x.gens_at(c)) + tuple(x.gens_at(c - 1)) for c in chains}

    p_elem = alg.scalar_element(tgt_spec, Fraction(p))
    diffs = {}
    for c in chains:
        entries = {}
        for i, j, f in lift.get(c, ()):
            entries[(i, j)] = f
        off_src = len(x.gens_at(c))
        off_tgt = len(x.gens_at(c - 1))
        for k in range(len(x.gens_at(c - 1))):
            entries[(k, off_src + k)] = p_elem
        # compensation block: -(lift d)^2 / p, exactly divisible since d^2 = 0 mod p
        square = cx._compose_blocks(tgt_spec, lift.get(c - 1, ()),
                                    lift.get(c, ()))
        for (i, j), f in square.items():
            comp = _divide_element_by_p(tgt_spec, f, p)
            entries[(off_tgt + i, j)] = alg.element_neg(tgt_spec, comp)
        for i, j, f in lift.get(c - 1, ()):
            entries[(off_tgt + i, off_src + j)] = alg.element_neg(tgt_spec, f)
        diffs[c] = entries
    return cx.build_complex(tgt_spec, gens, diffs)


def _divide_element_by_p(spec: AlgebraSpec, f, p: int):
    terms = []
    for m, coef in f:
        q = coef / p
        if q.denominator % p == 0:
            raise ArithmeticError("lift square not divisible by p")
        terms.append((m, q))
    return alg.element_from_terms(spec, terms)


# -- restriction along the rationalization --------------------------------------


def _entry_min_valuation(p: int, entries) -> int:
    vals = []
    for _, _, f in entries:
        for _, coef in f:
            num, den = coef.numerator, coef.denominator
            v = 0
            d = den
            while d % p == 0:
                d //= p
                v -= 1
            n = abs(num)
            while v >= 0 and n % p == 0:
                n //= p
                v += 1
            vals.append(v if v < 0 else 0)
    return min(vals) if vals else 0


def restrict_rational(y: FreeComplex, p: int) -> IndComplex:
    """The rational complex as an ind-object over the p-local algebra.

    Rescaling the chain-c generators by p^(m_c) multiplies the entries out of
    chain c by p^(m_c - m_{c-1}); a descending pass over chain degrees makes
    every entry valuation nonnegative, so the rescaled generators span a free
    p-local lattice isomorphic to the input over the rationals.  The telescope
    of multiplication by p on that lattice has the homology groups of the
    rational complex.
    """
    if y.spec.ring.kind != RATIONAL:
        raise SpecMismatch("restrict_rational expects a rational complex")
    zp_spec = y.spec.with_ring(CoefficientRing.p_local(p))
    chains = [c for c, _ in y.generators]
    scale = {}
    if chains:
        top = max(chains)
        scale[top] = 0
        entry_val = {c: _entry_min_valuation(p, y.diff_at(c))
                     for c, _ in y.differentials}
        for c in range(top, min(chains) - 1, -1):
            scale.setdefault(c, 0)
            v = entry_val.get(c, 0)
            scale[c - 1] = min(0, scale[c] + v)
    diffs = {}
    for c, entries in y.differentials:
        factor = Fraction(p) ** (scale[c] - scale.get(c - 1, 0))
        out = []
        for i, j, f in entries:
            g = alg.element_from_terms(
                zp_spec, [(m, coef * factor) for m, coef in f]
            )
            out.append((i, j, g))
        diffs[c] = tuple(out)
    lattice = cx.build_complex(zp_spec, dict(y.generators), diffs)
    p_elem = alg.scalar_element(zp_spec, Fraction(p))
    return cx.telescope(lattice, cx._degree_zero_mult(p_elem, lattice))


# -- mixed tensors and the projection formula ------------------------------------


def mixed_table(a, y: FreeComplex, w: DegreeWindow, cutoff: int = 8,
                consecutive: int = 2) -> cx.HomologyTable:
    """Homology table of (p-local object) tensor (rational restriction of y),
    computed entirely over the rationals via the projection formula."""
    rm = rationalize_map(a.spec)
    pushed = extend_scalars(rm, a)
    if isinstance(pushed, IndComplex):
        table, _ = cx.ind_homology(cx.ind_tensor(pushed, y), w, cutoff, consecutive)
        return table
    return cx.homology(cx.tensor(pushed, y), w)


def projection_formula_check(rm: RingMapTag, a, b, w: DegreeWindow,
                             cutoff: int = 8, consecutive: int = 2) -> bool:
    """Compare the two sides of the projection formula bidegree-wise.

    For the mod-p map both sides are free p-local complexes.  For the
    rationalization both sides are ind-objects: the restriction of the pushed
    tensor versus the tensor against the restricted factor.
    """
    if rm.kind == MOD_P:
        inner = cx.tensor(extend_scalars(rm, a), b)
        lhs = cx.homology(restrict_mod_p(inner), w)
        rhs = cx.homology(cx.tensor(a, restrict_mod_p(b)), w)
        return lhs == rhs
    if rm.kind == RATIONALIZE:
        p = rm.source.ring.p
        inner = cx.tensor(extend_scalars(rm, a), b)
        lhs, rep1 = cx.ind_homology(restrict_rational(inner, p), w, cutoff,
                                    consecutive)
        rhs, rep2 = cx.ind_homology(cx.ind_tensor(a, restrict_rational(b, p)),
                                    w, cutoff, consecutive)
        return rep1.ok and rep2.ok and lhs == rhs
    raise ValueError("projection formula check supports mod_p and rationalize")
