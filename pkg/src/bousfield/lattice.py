"""Finite complete lattices with a commutative join-distributive tensor.

These are the desk-scale stand-ins for Bousfield lattices: total tables over
at most a dozen elements, so every structural statement is an exhaustive
check.  The random generator draws models from nullity data of small
commutative monoids-with-zero, which guarantees all axioms by construction
and additionally makes the order agree with tensor-detection, exactly as it
does for honest Bousfield classes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import (
    AxiomViolation,
    GenerationFailure,
    InvalidIdeal,
    NotComplementedPair,
    NotUnital,
)


@dataclass(frozen=True)
class FiniteTensorLattice:
    """Total order/join/meet/tensor tables over elements 0..n-1."""

    names: tuple
    leq: tuple          # leq[i][j] is True when i <= j
    join: tuple
    meet: tuple
    tensor: tuple
    bottom: int
    top: int
    unital: bool = False
    label: str = ""

    @property
    def n(self) -> int:
        return len(self.names)

    def elements(self):
        return range(self.n)


def _lub(leq, n, bounds):
    """Least element above everything in bounds, None if absent."""
    ub = [z for z in range(n) if all(leq[x][z] for x in bounds)]
    least = [z for z in ub if all(leq[z][w] for w in ub)]
    return least[0] if least else None


def _glb(leq, n, bounds):
    lb = [z for z in range(n) if all(leq[z][x] for x in bounds)]
    greatest = [z for z in lb if all(leq[w][z] for w in lb)]
    return greatest[0] if greatest else None


def lattice_from_order(names, leq, tensor, unital=False, label="") -> FiniteTensorLattice:
    """Derive join/meet/bottom/top tables from an order matrix."""
    n = len(names)
    join, meet = [], []
    for i in range(n):
        jrow, mrow = [], []
        for j in range(n):
            ju = _lub(leq, n, (i, j))
            me = _glb(leq, n, (i, j))
            if ju is None or me is None:
                raise AxiomViolation([f"no join/meet for ({i},{j})"])
            jrow.append(ju)
            mrow.append(me)
        join.append(tuple(jrow))
        meet.append(tuple(mrow))
    bottom = _glb(leq, n, tuple(range(n)))
    top = _lub(leq, n, tuple(range(n)))
    if bottom is None or top is None:
        raise AxiomViolation(["order has no bottom or top"])
    return FiniteTensorLattice(tuple(names), tuple(tuple(r) for r in leq),
                               tuple(join), tuple(meet),
                               tuple(tuple(r) for r in tensor),
                               bottom, top, unital, label)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(lat: FiniteTensorLattice, strict: bool = True) -> ValidationReport:
    """Exhaustively check every model axiom; raise AxiomViolation when strict."""
    n, leq = lat.n, lat.leq
    bad = []
    for i in range(n):
        if not leq[i][i]:
            bad.append(f"not reflexive at {i}")
    for i, j in itertools.product(range(n), repeat=2):
        if i != j and leq[i][j] and leq[j][i]:
            bad.append(f"not antisymmetric at ({i},{j})")
    for i, j, k in itertools.product(range(n), repeat=3):
        if leq[i][j] and leq[j][k] and not leq[i][k]:
            bad.append(f"not transitive at ({i},{j},{k})")
    for i, j in itertools.product(range(n), repeat=2):
        if _lub(leq, n, (i, j)) != lat.join[i][j]:
            bad.append(f"join table wrong at ({i},{j})")
        if _glb(leq, n, (i, j)) != lat.meet[i][j]:
            bad.append(f"meet table wrong at ({i},{j})")
    t = lat.tensor
    for i, j in itertools.product(range(n), repeat=2):
        if t[i][j] != t[j][i]:
            bad.append(f"tensor not commutative at ({i},{j})")
        if not leq[t[i][j]][lat.meet[i][j]]:
            bad.append(f"tensor above meet at ({i},{j})")
    for i, j, k in itertools.product(range(n), repeat=3):
        if leq[i][j] and not leq[t[i][k]][t[j][k]]:
            bad.append(f"tensor not monotone at ({i},{j},{k})")
        if t[t[i][j]][k] != t[i][t[j][k]]:
            bad.append(f"tensor not associative at ({i},{j},{k})")
        if t[i][lat.join[j][k]] != lat.join[t[i][j]][t[i][k]]:
            bad.append(f"tensor not join-distributive at ({i},{j},{k})")
    for i in range(n):
        if t[i][lat.bottom] != lat.bottom:
            bad.append(f"bottom not absorbing at {i}")
    if lat.unital:
        for i in range(n):
            if t[i][lat.top] != i:
                bad.append(f"top not a unit at {i}")
    report = ValidationReport(tuple(bad))
    if strict and bad:
        raise AxiomViolation(bad)
    return report


# -- complementation and the distinguished sub-posets ----------------------------


def complement_op(lat: FiniteTensorLattice, z: int) -> int:
    """Join of every element tensoring z to bottom."""
    acc = lat.bottom
    for y in lat.elements():
        if lat.tensor[y][z] == lat.bottom:
            acc = lat.join[acc][y]
    return acc


def dl_elements(lat: FiniteTensorLattice) -> tuple:
    return tuple(x for x in lat.elements() if lat.tensor[x][x] == x)


def complements_of(lat: FiniteTensorLattice, x: int) -> tuple:
    return tuple(
        y for y in lat.elements()
        if lat.tensor[x][y] == lat.bottom and lat.join[x][y] == lat.top
    )


def ba_elements(lat: FiniteTensorLattice) -> tuple:
    """Tensor-idempotents with an idempotent complement."""
    dl = set(dl_elements(lat))
    out = []
    for x in dl:
        if any(c in dl for c in complements_of(lat, x)):
            out.append(x)
    return tuple(sorted(out))


def square_zero_elements(lat: FiniteTensorLattice) -> tuple:
    return tuple(
        x for x in lat.elements()
        if x != lat.bottom and lat.tensor[x][x] == lat.bottom
    )


def annihilation_adjunction_holds(lat: FiniteTensorLattice) -> bool:
    """y <= a(z) exactly when tensor(y, z) = bottom, for all pairs."""
    for z in lat.elements():
        az = complement_op(lat, z)
        for y in lat.elements():
            if lat.leq[y][az] != (lat.tensor[y][z] == lat.bottom):
                return False
    return True


def complement_op_antitone(lat: FiniteTensorLattice) -> bool:
    for x, y in itertools.product(lat.elements(), repeat=2):
        if lat.leq[x][y] and not lat.leq[complement_op(lat, y)][complement_op(lat, x)]:
            return False
    return True


def complement_op_involution_failures(lat: FiniteTensorLattice) -> tuple:
    """Elements where a(a(x)) != x; empty on detection-ordered models of
    genuine Bousfield data, but not a general axiom."""
    out = []
    for x in lat.elements():
        if complement_op(lat, complement_op(lat, x)) != x:
            out.append(x)
    return tuple(out)


# -- ideals, quotients, products ---------------------------------------------------


def down_set(lat: FiniteTensorLattice, a: int) -> tuple:
    return tuple(x for x in lat.elements() if lat.leq[x][a])


def up_set(lat: FiniteTensorLattice, a: int) -> tuple:
    return tuple(x for x in lat.elements() if lat.leq[a][x])


def is_ideal(lat: FiniteTensorLattice, subset) -> bool:
    s = set(subset)
    if not s:
        return False
    for a in s:
        for x in lat.elements():
            if lat.leq[x][a] and x not in s:
                return False
    for a, b in itertools.product(s, repeat=2):
        if lat.join[a][b] not in s:
            return False
    return True


def principal_generator(lat: FiniteTensorLattice, subset) -> int:
    """Every finite ideal is principal: its join is a member and generates it."""
    if not is_ideal(lat, subset):
        raise InvalidIdeal(f"{sorted(subset)} is not an ideal")
    gen = lat.bottom
    for a in subset:
        gen = lat.join[gen][a]
    if gen not in set(subset):
        raise InvalidIdeal("ideal does not contain its join")
    return gen


@dataclass(frozen=True)
class QuotientLattice:
    """Lattice quotient by a (principal) ideal.

    Classes are indexed 0..k-1; class_of maps base elements to classes;
    representatives are the canonical x v gen elements.
    """

    base: FiniteTensorLattice
    generator: int
    class_of: tuple
    representatives: tuple
    lattice: FiniteTensorLattice


def quotient_by_ideal(lat: FiniteTensorLattice, subset) -> QuotientLattice:
    """Quotient where [x] = [y] iff x v c = y v c for some ideal element c.

    For the principal ideal gen-down this is x v gen = y v gen, so classes
    biject with the up-set of gen and inherit its lattice structure.
    """
    gen = principal_generator(lat, subset)
    reps = sorted({lat.join[x][gen] for x in lat.elements()})
    index = {r: k for k, r in enumerate(reps)}
    class_of = tuple(index[lat.join[x][gen]] for x in lat.elements())
    k = len(reps)
    leq = tuple(
        tuple(lat.leq[reps[i]][reps[j]] for j in range(k)) for i in range(k)
    )
    tensor = tuple(
        tuple(index[lat.join[lat.tensor[reps[i]][reps[j]]][gen]] for j in range(k))
        for i in range(k)
    )
    names = tuple(f"[{lat.names[r]}]" for r in reps)
    qlat = lattice_from_order(names, leq, tensor, unital=False,
                              label=f"{lat.label}/down({lat.names[gen]})")
    return QuotientLattice(lat, gen, class_of, tuple(reps), qlat)


def up_set_lattice(lat: FiniteTensorLattice, a: int) -> FiniteTensorLattice:
    """The up-set of a, with tensor x, y -> (x tensor y) v a."""
    elems = up_set(lat, a)
    index = {x: k for k, x in enumerate(elems)}
    k = len(elems)
    leq = tuple(tuple(lat.leq[elems[i]][elems[j]] for j in range(k))
                for i in range(k))
    tensor = tuple(
        tuple(index[lat.join[lat.tensor[elems[i]][elems[j]]][a]] for j in range(k))
        for i in range(k)
    )
    names = tuple(lat.names[x] for x in elems)
    return lattice_from_order(names, leq, tensor, unital=False,
                              label=f"{lat.label}|up({lat.names[a]})")


def down_set_lattice(lat: FiniteTensorLattice, a: int) -> FiniteTensorLattice:
    """The down-set of a as a tensor lattice with top a.

    In a unital model with a complemented, every x <= a has x tensor a = x,
    so the restriction is unital again.
    """
    elems = down_set(lat, a)
    index = {x: k for k, x in enumerate(elems)}
    k = len(elems)
    leq = tuple(tuple(lat.leq[elems[i]][elems[j]] for j in range(k))
                for i in range(k))
    tensor = tuple(tuple(index[lat.tensor[elems[i]][elems[j]]] for j in range(k))
                   for i in range(k))
    unital = all(lat.tensor[x][a] == x for x in elems)
    names = tuple(lat.names[x] for x in elems)
    return lattice_from_order(names, leq, tensor, unital=unital,
                              label=f"{lat.label}|down({lat.names[a]})")


def quotient_up_set_isomorphism(lat: FiniteTensorLattice, a: int) -> bool:
    """The quotient by the principal ideal of a is the up-set of a via
    [x] -> x v a; exhaustively checks bijectivity and both orders."""
    q = quotient_by_ideal(lat, down_set(lat, a))
    ups = up_set(lat, a)
    image = [lat.join[reps][a] for reps in q.representatives]
    if sorted(image) != sorted(ups):
        return False
    for i, x in enumerate(q.representatives):
        for j, y in enumerate(q.representatives):
            if q.lattice.leq[i][j] != lat.leq[lat.join[x][a]][lat.join[y][a]]:
                return False
    return True


def product(k_lat: FiniteTensorLattice, l_lat: FiniteTensorLattice) -> FiniteTensorLattice:
    """Componentwise product lattice with componentwise tensor."""
    pairs = [(i, j) for i in k_lat.elements() for j in l_lat.elements()]
    index = {pr: k for k, pr in enumerate(pairs)}
    n = len(pairs)
    leq = tuple(
        tuple(k_lat.leq[a][c] and l_lat.leq[b][d] for (c, d) in pairs)
        for (a, b) in pairs
    )
    join = tuple(
        tuple(index[(k_lat.join[a][c], l_lat.join[b][d])] for (c, d) in pairs)
        for (a, b) in pairs
    )
    meet = tuple(
        tuple(index[(k_lat.meet[a][c], l_lat.meet[b][d])] for (c, d) in pairs)
        for (a, b) in pairs
    )
    tensor = tuple(
        tuple(index[(k_lat.tensor[a][c], l_lat.tensor[b][d])] for (c, d) in pairs)
        for (a, b) in pairs
    )
    names = tuple(f"({k_lat.names[a]},{l_lat.names[b]})" for (a, b) in pairs)
    return FiniteTensorLattice(
        names, leq, join, meet, tensor,
        index[(k_lat.bottom, l_lat.bottom)],
        index[(k_lat.top, l_lat.top)],
        k_lat.unital and l_lat.unital,
        label=f"({k_lat.label})x({l_lat.label})",
    )


def product_quotient_is_factor(k_lat: FiniteTensorLattice,
                               l_lat: FiniteTensorLattice) -> bool:
    """(K x L) / (bottom x L) is K, via the canonical representatives."""
    prod = product(k_lat, l_lat)
    ideal = [k for k, name in enumerate(prod.names)
             if prod.leq[k][_index_of(prod, k_lat.bottom, l_lat.top, l_lat)]]
    q = quotient_by_ideal(prod, ideal)
    if q.lattice.n != k_lat.n:
        return False
    # representatives are (a, top_L); compare order matrices through that map
    reps = q.representatives
    firsts = []
    for r in reps:
        a, b = divmod(r, l_lat.n)
        if b != l_lat.top:
            return False
        firsts.append(a)
    if sorted(firsts) != list(k_lat.elements()):
        return False
    for i, x in enumerate(firsts):
        for j, y in enumerate(firsts):
            if q.lattice.leq[i][j] != k_lat.leq[x][y]:
                return False
    return True


def _index_of(prod: FiniteTensorLattice, a: int, b: int,
              l_lat: FiniteTensorLattice) -> int:
    return a * l_lat.n + b


# -- quotient-map and splitting analyses ---------------------------------------------


@dataclass(frozen=True)
class QuotientMapReport:
    """Outcome of mapping [x] -> x tensor z from the quotient by a(z)-down
    onto the tensor image of z (ordered as in the ambient lattice).

    The tensor image stands in for the lattice of the quotient category;
    surjectivity onto it is built in, so the content is injectivity.
    """

    z: int
    az: int
    complemented: bool
    well_defined: bool
    order_preserving: bool
    injective: bool
    witness: tuple = ()


def quotient_map_analysis(lat: FiniteTensorLattice, z: int) -> QuotientMapReport:
    if not lat.unital:
        raise NotUnital("quotient map analysis needs a unital model")
    az = complement_op(lat, z)
    q = quotient_by_ideal(lat, down_set(lat, az))
    reps = q.representatives

    well_defined = True
    order_preserving = True
    for x, y in itertools.product(lat.elements(), repeat=2):
        if lat.join[x][az] == lat.join[y][az]:
            if lat.tensor[x][z] != lat.tensor[y][z]:
                well_defined = False
        if lat.leq[lat.join[x][az]][lat.join[y][az]]:
            if not lat.leq[lat.tensor[x][z]][lat.tensor[y][z]]:
                order_preserving = False

    images = [lat.tensor[r][z] for r in reps]
    injective = len(set(images)) == len(images)
    witness = ()
    if not injective:
        seen = {}
        for k, img in enumerate(images):
            if img in seen:
                witness = (lat.names[reps[seen[img]]], lat.names[reps[k]])
                break
            seen[img] = k
    complemented = lat.join[z][az] == lat.top
    return QuotientMapReport(z, az, complemented, well_defined,
                             order_preserving, injective, witness)


@dataclass(frozen=True)
class SplittingReport:
    """x -> (x tensor z, x tensor zc) against the two down-set factors."""

    bijective: bool
    order_isomorphism: bool
    inverse_is_join: bool
    dl_splits: bool
    ba_splits: bool

    @property
    def ok(self) -> bool:
        return (self.bijective and self.order_isomorphism
                and self.inverse_is_join and self.dl_splits and self.ba_splits)


def splitting_check(lat: FiniteTensorLattice, z: int, zc: int) -> SplittingReport:
    if not lat.unital:
        raise NotUnital("splitting check needs a unital model")
    if lat.tensor[z][zc] != lat.bottom or lat.join[z][zc] != lat.top:
        raise NotComplementedPair(
            f"{lat.names[z]}, {lat.names[zc]} are not complementary"
        )
    dz, dzc = down_set(lat, z), down_set(lat, zc)
    pairs = {}
    for x in lat.elements():
        pairs[x] = (lat.tensor[x][z], lat.tensor[x][zc])
    bijective = (len(set(pairs.values())) == lat.n
                 and len(pairs) == len(dz) * len(dzc))
    inverse_is_join = all(
        lat.join[a][b] == x for x, (a, b) in pairs.items()
    )
    order_isomorphism = all(
        lat.leq[x][y] == (lat.leq[pairs[x][0]][pairs[y][0]]
                          and lat.leq[pairs[x][1]][pairs[y][1]])
        for x, y in itertools.product(lat.elements(), repeat=2)
    )

    lz, lzc = down_set_lattice(lat, z), down_set_lattice(lat, zc)
    iz = {x: k for k, x in enumerate(dz)}
    izc = {x: k for k, x in enumerate(dzc)}
    dl = set(dl_elements(lat))
    dl_pairs = {(iz[pairs[x][0]], izc[pairs[x][1]]) for x in dl}
    dl_target = {
        (a, b)
        for a in dl_elements(lz) for b in dl_elements(lzc)
    }
    dl_splits = dl_pairs == dl_target
    ba = set(ba_elements(lat))
    ba_pairs = {(iz[pairs[x][0]], izc[pairs[x][1]]) for x in ba}
    ba_target = {
        (a, b)
        for a in ba_elements(lz) for b in ba_elements(lzc)
    }
    ba_splits = ba_pairs == ba_target
    return SplittingReport(bijective, order_isomorphism, inverse_is_join,
                           dl_splits, ba_splits)


@dataclass(frozen=True)
class SquareFreeReport:
    applicable: bool
    all_complemented: bool
    detection_faithful: bool
    everything_idempotent: bool
    dl_is_all: bool
    ba_is_all: bool


def sq_free_check(lat: FiniteTensorLattice) -> SquareFreeReport:
    """Without square-zero elements, every x tensor-detects through x v a(x);
    on detection-ordered models that join is the top, so everything is
    complemented.  Reported as not applicable when square-zeros exist."""
    if square_zero_elements(lat):
        return SquareFreeReport(False, False, False, False, False, False)
    detection = True
    all_comp = True
    for x in lat.elements():
        ax = complement_op(lat, x)
        j = lat.join[x][ax]
        for y in lat.elements():
            if lat.tensor[y][j] == lat.bottom and y != lat.bottom:
                detection = False
        if j != lat.top:
            all_comp = False
    idem = len(dl_elements(lat)) == lat.n
    dl_all = idem
    ba_all = len(ba_elements(lat)) == lat.n
    return SquareFreeReport(True, all_comp, detection, idem, dl_all, ba_all)


# -- random models -----------------------------------------------------------------


@dataclass(frozen=True)
class ModelFlags:
    unital: bool = True
    idempotent: bool = False
    with_square_zero: bool = False


def _random_monoid(rng: random.Random, flags: ModelFlags):
    """A small commutative monoid-with-zero given by a product table.

    Families: truncated cyclic (t^i, nilpotent), idempotent chains, and
    products of two such.  Element 0 is the absorbing zero and is kept out of
    the returned atom list.
    """

    def truncated(nil: int):
        # elements e, t, t^2, ..., t^(nil-1); t^a * t^b = 0 once a+b >= nil
        atoms = [f"t{k}" if k else "e" for k in range(nil)]
        def mul(a, b):
            k = int(a[1:] or 0) if a != "e" else 0
            k2 = int(b[1:] or 0) if b != "e" else 0
            s = k + k2
            return None if s >= nil else (f"t{s}" if s else "e")
        return atoms, mul

    def idem_chain(depth: int):
        # e >= c1 >= ... >= c_depth, c_i * c_j = c_max(i,j); all idempotent
        atoms = ["e"] + [f"c{k}" for k in range(1, depth + 1)]
        def mul(a, b):
            ka = 0 if a == "e" else int(a[1:])
            kb = 0 if b == "e" else int(b[1:])
            k = max(ka, kb)
            return "e" if k == 0 else f"c{k}"
        return atoms, mul

    if flags.idempotent:
        fams = [idem_chain(rng.randint(1, 2))]
    elif flags.with_square_zero:
        fams = [truncated(2)]
        if rng.random() < 0.5:
            fams.append(idem_chain(1))
    else:
        fams = []
        for _ in range(rng.randint(1, 2)):
            if rng.random() < 0.5:
                fams.append(truncated(rng.randint(2, 3)))
            else:
                fams.append(idem_chain(rng.randint(1, 2)))
    # product monoid over the chosen families
    lists = [f[0] for f in fams]
    muls = [f[1] for f in fams]
    atoms = list(itertools.product(*lists))

    def mul(a, b):
        out = []
        for x, y, m in zip(a, b, muls):
            r = m(x, y)
            if r is None:
                return None
            out.append(r)
        return tuple(out)

    unit = tuple("e" for _ in fams)
    if not flags.unital:
        atoms = [a for a in atoms if a != unit]
        if not atoms:
            return None
    return atoms, mul


def random_model(seed: int, size: int, flags: ModelFlags = ModelFlags()) -> FiniteTensorLattice:
    """Deterministic random quantale model with at most `size` elements.

    Classes are subsets of monoid atoms modulo equal annihilator columns, so
    the order is exactly tensor-detection; this is what makes the square-free
    and unitality theorems hold on every output.
    """
    if size < 2 or size > 10:
        raise GenerationFailure("size must be between 2 and 10")
    rng = random.Random(seed)
    for _ in range(64):
        made = _random_monoid(rng, flags)
        if made is None:
            continue
        atoms, mul = made
        if size == 2:
            atoms = atoms[:1]
        if len(atoms) > 4:
            continue
        lat = _model_from_monoid(atoms, mul, flags.unital)
        if lat is None or lat.n > size:
            continue
        if flags.with_square_zero and not square_zero_elements(lat):
            continue
        if not validate(lat, strict=False).ok:
            continue
        return lat
    raise GenerationFailure(f"no model of size <= {size} found for seed {seed}")


def _model_from_monoid(atoms, mul, unital: bool):
    subsets = []
    for bits in range(1 << len(atoms)):
        subsets.append(frozenset(a for k, a in enumerate(atoms) if bits >> k & 1))

    def prod(s, t):
        out = set()
        for a in s:
            for b in t:
                r = mul(a, b)
                if r is not None:
                    out.add(r)
        return frozenset(out)

    def column(s):
        return frozenset(k for k, t in enumerate(subsets) if not prod(s, t))

    cols = [column(s) for s in subsets]
    classes = sorted(set(cols), key=lambda c: (-len(c), sorted(c)))
    index = {c: k for k, c in enumerate(classes)}
    n = len(classes)
    rep = {}
    for k, s in enumerate(subsets):
        cls = index[cols[k]]
        if cls not in rep or len(s) < len(rep[cls]):
            rep[cls] = s
    leq = tuple(
        tuple(classes[j] <= classes[i] for j in range(n)) for i in range(n)
    )
    tensor = tuple(
        tuple(index[column(prod(rep[i], rep[j]))] for j in range(n))
        for i in range(n)
    )
    names = tuple(
        "0" if not rep[k] else "{" + ",".join(sorted(map(str, rep[k]))) + "}"
        for k in range(n)
    )
    try:
        lat = lattice_from_order(names, leq, tensor, unital=unital,
                                 label="random-monoid-model")
    except AxiomViolation:
        return None
    if unital and any(lat.tensor[x][lat.top] != x for x in lat.elements()):
        return None
    return lat
