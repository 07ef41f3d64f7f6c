"""Finite object catalogs, nullity matrices, and the observed lattice.

A catalog is a list of objects over one of three coefficient homes, each
carried by a construction expression; the nullity matrix records, per pair,
whether the routed tensor vanishes inside a degree window.  Everything
derived from it is explicitly window- and catalog-relative: an "observed"
class or lattice is a statement about this finite data, never about the full
class lattice.

Tensor routing between homes: same home directly; p-local against rational
through extension of scalars to the rationals; p-local against mod-p through
extension to mod-p coefficients (the projection formula makes either routing
equivalent for vanishing).  Mod-p against rational pairs are rejected.

Direct-sum objects never need their own tensor computations: a sum vanishes
against a tester exactly when both summands do, so their rows and columns are
propagated from the summands.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from . import algebra as alg
from . import base_change as bc
from . import complexes as cx
from .algebra import AlgebraSpec
from .catalog_expr import Expr, canonical, parse_expression
from .complexes import DegreeWindow, FreeComplex, IndComplex, ZeroStatus
from .errors import (
    EvaluationError,
    InconclusiveNullity,
    MissingJoinWitness,
    SpecMismatch,
    UnroutablePair,
)
from .lattice import FiniteTensorLattice, lattice_from_order
from .scalars import FP, P_LOCAL, RATIONAL, CoefficientRing

HOMES = ("zp", "fp", "q")


@dataclass(frozen=True)
class CatalogObject:
    ident: int
    home: str
    provenance: str
    representation: object  # FreeComplex | IndComplex

    @property
    def is_ind(self) -> bool:
        return isinstance(self.representation, IndComplex)


class Catalog:
    """Mutable builder around a base prime and shared algebra rules."""

    def __init__(self, prime: int, exponent_prefix=(), exponent_default: int = 2,
                 degree_prefix=()):
        self.prime = prime
        base = AlgebraSpec(CoefficientRing.p_local(prime), tuple(exponent_prefix),
                           exponent_default, tuple(degree_prefix))
        self.specs = {
            "zp": base,
            "fp": base.with_ring(CoefficientRing.fp(prime)),
            "q": base.with_ring(CoefficientRing.rational()),
        }
        self.objects: list = []
        self._by_provenance: dict = {}
        self.cap_exceeded = False

    # -- construction ---------------------------------------------------------

    def add_object(self, expression: str) -> int:
        """Materialize an expression; identical provenance is deduplicated."""
        expr = canonical(parse_expression(expression))
        key = expr.render()
        if key in self._by_provenance:
            return self._by_provenance[key]
        home, rep = self._evaluate(expr)
        ident = len(self.objects)
        self.objects.append(CatalogObject(ident, home, key, rep))
        self._by_provenance[key] = ident
        return ident

    def _evaluate(self, expr: Expr):
        head, args = expr.head, expr.args
        if head == "zero":
            return "zp", cx.zero_complex(self.specs["zp"])
        if head == "unit":
            return "zp", cx.unit_complex(self.specs["zp"])
        if head == "unit_fp":
            return "fp", cx.unit_complex(self.specs["fp"])
        if head == "unit_q":
            return "q", cx.unit_complex(self.specs["q"])
        if head in ("shift", "twist"):
            home, rep = self._evaluate(args[0])
            n = args[1]
            if head == "twist":
                if isinstance(rep, IndComplex):
                    raise EvaluationError("twist of ind-objects is unsupported")
                return home, cx.internal_twist(rep, n)
            if isinstance(rep, IndComplex):
                return home, cx.ind_shift(rep, n)
            return home, cx.shift(rep, n)
        if head in ("sum", "tensor"):
            home_a, a = self._evaluate(args[0])
            home_b, b = self._evaluate(args[1])
            if home_a != home_b:
                raise EvaluationError("sum/tensor operands must share a home")
            if isinstance(a, IndComplex) or isinstance(b, IndComplex):
                maker = cx.ind_tensor if head == "tensor" else cx.ind_sum
                return home_a, maker(a, b)
            maker = cx.tensor if head == "tensor" else cx.direct_sum
            return home_a, maker(a, b)
        if head in ("cone", "telescope", "telescope_cofiber"):
            home, rep = self._evaluate(args[1])
            if isinstance(rep, IndComplex):
                raise EvaluationError(f"{head} needs a free complex operand")
            from .catalog_expr import parse_element_text

            z = parse_element_text(rep.spec, args[0])
            if head == "cone":
                return home, cx.cone_of_element(z, rep)
            if head == "telescope":
                return home, cx.telescope_of_element(z, rep)
            return home, cx.telescope_cofiber(z, rep)
        if head == "push_mod_p":
            home, rep = self._evaluate(args[0])
            if home != "zp":
                raise EvaluationError("push_mod_p needs a p-local operand")
            return "fp", bc.extend_scalars(bc.mod_p_map(self.specs["zp"]), rep)
        if head == "push_rational":
            home, rep = self._evaluate(args[0])
            if home != "zp":
                raise EvaluationError("push_rational needs a p-local operand")
            return "q", bc.extend_scalars(bc.rationalize_map(self.specs["zp"]), rep)
        if head == "restrict_mod_p":
            home, rep = self._evaluate(args[0])
            if home != "fp" or isinstance(rep, IndComplex):
                raise EvaluationError("restrict_mod_p needs a free mod-p operand")
            return "zp", bc.restrict_mod_p(rep)
        if head == "restrict_rational":
            home, rep = self._evaluate(args[0])
            if home != "q" or isinstance(rep, IndComplex):
                raise EvaluationError("restrict_rational needs a free rational operand")
            return "zp", bc.restrict_rational(rep, self.prime)
        raise EvaluationError(f"unknown constructor {head!r}")

    def close_under(self, ops=("sum", "tensor"), cap: int = 40) -> None:
        """Breadth-first closure by pairwise sums then tensors, id order,
        until the cap; sets cap_exceeded instead of failing."""
        allowed = set(ops)
        if not allowed <= {"sum", "tensor", "shift"}:
            raise EvaluationError(f"closure supports sum/tensor/shift, got {ops}")
        frontier = list(range(len(self.objects)))
        while frontier:
            new_ids = []
            base = [self.objects[i] for i in range(len(self.objects))]
            for op in ("sum", "tensor"):
                if op not in allowed:
                    continue
                for i in range(len(base)):
                    for j in range(i if op == "tensor" else i + 1, len(base)):
                        a, b = base[i], base[j]
                        if a.home != b.home:
                            continue
                        if "zero" in (a.provenance, b.provenance):
                            continue
                        expr = canonical(parse_expression(
                            f"{op}({a.provenance}, {b.provenance})"
                        )).render()
                        if expr in self._by_provenance:
                            continue
                        if len(self.objects) >= cap:
                            self.cap_exceeded = True
                            return
                        new_ids.append(self.add_object(expr))
            if "shift" in allowed:
                for obj in base:
                    expr = canonical(parse_expression(
                        f"shift({obj.provenance}, 1)"
                    )).render()
                    if expr in self._by_provenance:
                        continue
                    if len(self.objects) >= cap:
                        self.cap_exceeded = True
                        return
                    new_ids.append(self.add_object(expr))
            frontier = new_ids

    def hash(self) -> str:
        payload = "|".join(
            f"{o.home}:{o.provenance}" for o in self.objects
        ) + f"|p={self.prime}"
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    # -- tensor routing ---------------------------------------------------------

    def routed_tensor(self, a: CatalogObject, b: CatalogObject):
        """Representation of the routed product and the home it lives in."""
        if a.home == b.home:
            return self._pair_tensor(a.representation, b.representation), a.home
        homes = {a.home, b.home}
        if homes == {"zp", "q"}:
            zp, q = (a, b) if a.home == "zp" else (b, a)
            pushed = bc.extend_scalars(bc.rationalize_map(self.specs["zp"]),
                                       zp.representation)
            return self._pair_tensor(pushed, q.representation), "q"
        if homes == {"zp", "fp"}:
            zp, fp = (a, b) if a.home == "zp" else (b, a)
            pushed = bc.extend_scalars(bc.mod_p_map(self.specs["zp"]),
                                       zp.representation)
            return self._pair_tensor(pushed, fp.representation), "fp"
        raise UnroutablePair(f"{a.home} x {b.home} tensors are not routed")

    @staticmethod
    def _pair_tensor(a, b):
        if isinstance(a, IndComplex) or isinstance(b, IndComplex):
            return cx.ind_tensor(a, b)
        return cx.tensor(a, b)


# -- nullity --------------------------------------------------------------------


@dataclass(frozen=True)
class NullityMatrix:
    """Symmetric window-relative vanishing statuses over catalog ids."""

    window: DegreeWindow
    cutoff: int
    consecutive: int
    catalog_hash: str
    statuses: tuple  # row-major tuple of ZeroStatus

    def status(self, i: int, j: int) -> ZeroStatus:
        n = int(len(self.statuses) ** 0.5)
        return self.statuses[i * n + j]

    @property
    def size(self) -> int:
        return int(len(self.statuses) ** 0.5)

    def zero_column(self, j: int) -> frozenset:
        """Ids whose routed tensor against j vanished."""
        return frozenset(
            i for i in range(self.size) if self.status(i, j).is_zero
        )

    def inconclusive_entries(self) -> tuple:
        n = self.size
        return tuple(
            (i, j)
            for i in range(n)
            for j in range(i, n)
            if self.statuses[i * n + j].kind == "inconclusive"
        )


def _merge_sum_status(left: ZeroStatus, right: ZeroStatus) -> ZeroStatus:
    """Status of (A + B) x T from the statuses of A x T and B x T."""
    if left.is_witness or right.is_witness:
        wits = [s for s in (left, right) if s.is_witness]
        best = min(wits, key=lambda s: s.bidegree)
        return best
    if left.kind == "inconclusive" or right.kind == "inconclusive":
        bad = left if left.kind == "inconclusive" else right
        return bad
    return ZeroStatus("zero", stage=max(left.stage, right.stage))


def _sum_parts(expr: Expr):
    if expr.head == "sum":
        return expr.args
    return None


def compute_nullity(catalog: Catalog, window: DegreeWindow, cutoff: int = 8,
                    consecutive: int = 2) -> NullityMatrix:
    """Pairwise vanishing of routed tensors.

    Pairs whose either side is a direct sum are folded from the summand rows,
    which is exact: a coproduct vanishes against a tester when both summands
    do.  Remaining core pairs are computed directly.
    """
    n = len(catalog.objects)
    parts = {}
    for obj in catalog.objects:
        sp = _sum_parts(canonical(parse_expression(obj.provenance)))
        if sp is not None:
            ids = tuple(catalog._by_provenance.get(p.render()) for p in sp)
            if all(i is not None for i in ids):
                parts[obj.ident] = ids

    cache: dict = {}

    def entry(i: int, j: int) -> ZeroStatus:
        if i > j:
            return entry(j, i)
        if (i, j) in cache:
            return cache[(i, j)]
        if i in parts:
            a, b = parts[i]
            res = _merge_sum_status(entry(a, j), entry(b, j))
        elif j in parts:
            a, b = parts[j]
            res = _merge_sum_status(entry(i, a), entry(i, b))
        else:
            rep, _home = catalog.routed_tensor(catalog.objects[i],
                                               catalog.objects[j])
            res = cx.is_zero_in_window(rep, window, cutoff, consecutive)
        cache[(i, j)] = res
        return res

    statuses = tuple(entry(i, j) for i in range(n) for j in range(n))
    return NullityMatrix(window, cutoff, consecutive, catalog.hash(), statuses)


def tester_column(catalog: Catalog, nullity: NullityMatrix, rep, home: str,
                  window=None) -> frozenset:
    """Zero-set of an external object against the catalog's testers."""
    window = window or nullity.window
    zeros = set()
    for obj in catalog.objects:
        sp = _sum_parts(canonical(parse_expression(obj.provenance)))
        if sp is not None:
            ids = [catalog._by_provenance.get(p.render()) for p in sp]
            if all(k is not None for k in ids):
                if all(k in zeros for k in ids):
                    zeros.add(obj.ident)
                continue
        probe = CatalogObject(-1, home, "probe", rep)
        routed, _ = catalog.routed_tensor(probe, obj)
        status = cx.is_zero_in_window(routed, window, nullity.cutoff,
                                      nullity.consecutive)
        if status.kind == "inconclusive":
            raise InconclusiveNullity([(obj.ident, "probe")])
        if status.is_zero:
            zeros.add(obj.ident)
    return frozenset(zeros)


# -- observed order and lattice ----------------------------------------------------


def observed_preorder(nullity: NullityMatrix) -> tuple:
    """Reverse-inclusion order matrix on catalog ids: i <= j when every
    tester vanishing against j also vanishes against i."""
    bad = nullity.inconclusive_entries()
    if bad:
        raise InconclusiveNullity(bad)
    n = nullity.size
    cols = [nullity.zero_column(k) for k in range(n)]
    return tuple(
        tuple(cols[j] <= cols[i] for j in range(n)) for i in range(n)
    )


@dataclass(frozen=True)
class ObservedClass:
    """A class of catalog objects with identical zero-sets, or a virtual join
    of such classes (its column is the intersection, which is exact for
    coproducts)."""

    column: frozenset
    members: tuple        # catalog ids, empty for virtual joins
    generators: tuple     # class indexes joined to form a virtual class

    @property
    def is_virtual(self) -> bool:
        return not self.members


@dataclass(frozen=True)
class ObservedLattice:
    """Finite observed lattice: classes, order, join/tensor witnesses.

    Always labeled by window and catalog hash; nothing here is a statement
    about the genuine class lattice of the derived category.
    """

    window: DegreeWindow
    catalog_hash: str
    classes: tuple
    leq: tuple
    join: tuple
    tensor: tuple
    bottom: int
    top: int

    @property
    def n(self) -> int:
        return len(self.classes)

    def class_of_object(self, ident: int):
        for k, cls in enumerate(self.classes):
            if ident in cls.members:
                return k
        raise KeyError(ident)

    def to_tensor_lattice(self) -> FiniteTensorLattice:
        names = []
        for k, cls in enumerate(self.classes):
            if cls.members:
                names.append(f"c{cls.members[0]}")
            else:
                names.append("v" + "+".join(str(g) for g in cls.generators))
        unital = all(self.tensor[x][self.top] == x for x in range(self.n))
        return lattice_from_order(
            names, self.leq, self.tensor, unital=unital,
            label=f"observed[{self.catalog_hash}]",
        )


def observed_lattice(catalog: Catalog, nullity: NullityMatrix,
                     max_classes: int = 128) -> ObservedLattice:
    """Classes by zero-set, closed under tensor witnesses and intersections.

    Tensor products of class representatives that land in a fresh column are
    materialized as new (real) classes; columns arising only as intersections
    are virtual joins of real classes, which is exact because a coproduct
    vanishes against a tester exactly when all its parts do.
    """
    bad = nullity.inconclusive_entries()
    if bad:
        raise InconclusiveNullity(bad)
    n = nullity.size
    members: dict = {}
    reps: dict = {}
    for obj in catalog.objects:
        col = nullity.zero_column(obj.ident)
        members.setdefault(col, []).append(obj.ident)
        if col not in reps or obj.ident < reps[col][2]:
            reps[col] = (obj.representation, obj.home, obj.ident)

    # tensor closure over real representatives, materializing new columns
    tensor_cols: dict = {}
    while True:
        real = sorted(reps, key=lambda c: (-len(c), sorted(c)))
        added = False
        for a in real:
            for b in real:
                key = (a, b) if (sorted(a), sorted(b)) <= (sorted(b), sorted(a)) else (b, a)
                if key in tensor_cols:
                    continue
                rep_a, home_a, _ = reps[key[0]]
                rep_b, home_b, _ = reps[key[1]]
                probe_a = CatalogObject(-1, home_a, "probe", rep_a)
                probe_b = CatalogObject(-1, home_b, "probe", rep_b)
                rep, home = catalog.routed_tensor(probe_a, probe_b)
                col = tester_column(catalog, nullity, rep, home)
                tensor_cols[key] = col
                if col not in reps:
                    reps[col] = (rep, home, n + len(reps))
                    added = True
        if len(reps) > max_classes:
            raise MissingJoinWitness("tensor closure exceeded the class bound")
        if not added:
            break

    columns = {col: tuple(sorted(members.get(col, ()))) for col in reps}
    # intersection closure: virtual joins
    changed = True
    while changed:
        changed = False
        existing = list(columns)
        for a in existing:
            for b in existing:
                inter = a & b
                if inter not in columns:
                    columns[inter] = ()
                    changed = True
        if len(columns) > max_classes:
            raise MissingJoinWitness("class closure exceeded the bound")

    order = sorted(columns, key=lambda c: (-len(c), sorted(c)))
    index = {c: k for k, c in enumerate(order)}
    real_cols = set(reps)
    classes = []
    for col in order:
        ids = columns[col]
        gens = ()
        if col not in real_cols:
            gens = tuple(
                index[c] for c in order if c in real_cols and col <= c
            )
        classes.append(ObservedClass(col, ids, gens))
    k = len(order)
    leq = tuple(
        tuple(order[j] <= order[i] for j in range(k)) for i in range(k)
    )
    join = tuple(
        tuple(index[order[i] & order[j]] for j in range(k)) for i in range(k)
    )

    def pair_col(a, b):
        key = (a, b) if (sorted(a), sorted(b)) <= (sorted(b), sorted(a)) else (b, a)
        return tensor_cols[key]

    def class_tensor(i, j):
        a, b = order[i], order[j]
        parts_i = [a] if a in real_cols else [c for c in order
                                              if c in real_cols and a <= c]
        parts_j = [b] if b in real_cols else [c for c in order
                                              if c in real_cols and b <= c]
        acc = None
        for ca in parts_i:
            for cb in parts_j:
                col = pair_col(ca, cb)
                acc = col if acc is None else (acc & col)
        return index[acc]

    tensor = tuple(tuple(class_tensor(i, j) for j in range(k)) for i in range(k))
    full = frozenset(range(n))
    bottom = index[full] if full in index else 0
    tops = [index[c] for c in order if all(c <= d for d in order)]
    top = tops[0] if tops else index[min(order, key=lambda c: (len(c), sorted(c)))]
    return ObservedLattice(nullity.window, nullity.catalog_hash,
                           tuple(classes), leq, join, tensor, bottom, top)
