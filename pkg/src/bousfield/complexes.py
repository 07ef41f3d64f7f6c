"""Bounded complexes of shifted free modules, windowed homology, ind-objects.

A FreeComplex stores, per chain degree, the internal degrees of its free
generators and a sparse differential matrix with homogeneous algebra-element
entries.  The differential drops the chain degree by one and preserves
internal degree, so homology splits into independent bidegree slices; each
slice is a finite matrix problem over the coefficient ring, solved exactly by
Smith normal form.  Results inside a degree window are exact for the full
infinite-variable ring.

Sign conventions, fixed once: the cone differential is [[d_Y, phi], [0, -d_X]],
the tensor differential puts (-1)^(left chain degree) on the right factor, and
shifting by s multiplies differentials by (-1)^s.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import algebra as alg
from .algebra import AlgebraSpec, Element
from .errors import SpecMismatch
from .scalars import (
    Descriptor,
    ZERO_DESCRIPTOR,
    descriptor_from_relations,
    image_descriptor,
    smith_normal_form,
)


@dataclass(frozen=True)
class DegreeWindow:
    """Internal-degree range [lo, hi] and chain-degree range [c_lo, c_hi]."""

    lo: int
    hi: int
    c_lo: int
    c_hi: int

    def __post_init__(self):
        if self.lo > self.hi or self.c_lo > self.c_hi:
            raise ValueError("empty degree window")

    def contains(self, c: int, d: int) -> bool:
        return self.c_lo <= c <= self.c_hi and self.lo <= d <= self.hi


DEFAULT_WINDOW = DegreeWindow(-64, 64, -8, 8)


@dataclass(frozen=True)
class FreeComplex:
    """Bounded complex of free modules with homogeneous differentials.

    generators: ((chain_degree, (internal degrees...)), ...) sorted, nonempty
    rows only.  differentials: ((chain_degree c, ((row, col, element), ...)),
    ...) where the block at c maps generators at c to generators at c - 1 and
    the entry (i, j) is homogeneous of internal degree deg(src j) - deg(tgt i).
    d о d = 0 is verified exactly on construction.
    """

    spec: AlgebraSpec
    generators: tuple
    differentials: tuple

    def __post_init__(self):
        gens = dict(self.generators)
        if list(self.generators) != sorted(self.generators):
            raise ValueError("generator rows must be sorted by chain degree")
        if any(not degs for _, degs in self.generators):
            raise ValueError("empty generator rows must be omitted")
        diffs = dict(self.differentials)
        if list(self.differentials) != sorted(self.differentials):
            raise ValueError("differential blocks must be sorted")
        for c, entries in self.differentials:
            src = gens.get(c, ())
            tgt = gens.get(c - 1, ())
            if not entries:
                raise ValueError("empty differential blocks must be omitted")
            if list(entries) != sorted(entries, key=lambda e: (e[0], e[1])):
                raise ValueError("entries must be sorted by (row, col)")
            for i, j, f in entries:
                if not (0 <= i < len(tgt) and 0 <= j < len(src)):
                    raise ValueError(f"entry ({i},{j}) out of range at chain {c}")
                if not f:
                    raise ValueError("zero entries must not be stored")
                deg = alg.element_degree(self.spec, f)
                if deg != src[j] - tgt[i]:
                    raise ValueError(
                        f"entry at chain {c} ({i},{j}) has degree {deg}, "
                        f"expected {src[j] - tgt[i]}"
                    )
        for c in diffs:
            if c - 1 in diffs:
                prod = _compose_blocks(self.spec, diffs[c - 1], diffs[c])
                if prod:
                    raise ValueError(f"d o d != 0 at chain degree {c}")

    # -- structure accessors -------------------------------------------------

    def gens_at(self, c: int) -> tuple:
        for cc, degs in self.generators:
            if cc == c:
                return degs
        return ()

    def diff_at(self, c: int) -> tuple:
        for cc, entries in self.differentials:
            if cc == c:
                return entries
        return ()

    def chain_degrees(self) -> tuple:
        return tuple(c for c, _ in self.generators)

    def min_gen_degree(self) -> int:
        degs = [d for _, row in self.generators for d in row]
        return min(degs) if degs else 0

    @property
    def is_trivial(self) -> bool:
        return not self.generators


def _entries_to_dict(entries) -> dict:
    return {(i, j): f for i, j, f in entries}


def _dict_to_entries(spec: AlgebraSpec, d: dict) -> tuple:
    return tuple(
        (i, j, f) for (i, j), f in sorted(d.items()) if f
    )


def _compose_blocks(spec: AlgebraSpec, left_entries, right_entries) -> dict:
    """Sparse product: (left o right)[i, j] for left: c-1 -> c-2, right: c -> c-1."""
    left_by_col = {}
    for i, k, f in left_entries:
        left_by_col.setdefault(k, []).append((i, f))
    out = {}
    for k, j, g in right_entries:
        for i, f in left_by_col.get(k, ()):
            term = alg.algebra_mul(spec, f, g)
            if term:
                cur = out.get((i, j))
                s = alg.element_add(spec, cur, term) if cur else term
                if s:
                    out[(i, j)] = s
                elif cur:
                    del out[(i, j)]
    return {k: v for k, v in out.items() if v}


def build_complex(spec: AlgebraSpec, generators: dict, differentials: dict) -> FreeComplex:
    """Assemble a FreeComplex from chain-degree keyed dicts."""
    gens = tuple(sorted((c, tuple(v)) for c, v in generators.items() if v))
    diffs = []
    for c, entries in sorted(differentials.items()):
        if isinstance(entries, dict):
            entries = _dict_to_entries(spec, entries)
        else:
            entries = tuple(sorted(entries, key=lambda e: (e[0], e[1])))
        if entries:
            diffs.append((c, entries))
    return FreeComplex(spec, gens, tuple(diffs))


def zero_complex(spec: AlgebraSpec) -> FreeComplex:
    return FreeComplex(spec, (), ())


def unit_complex(spec: AlgebraSpec) -> FreeComplex:
    """The ring itself, one generator in bidegree (0, 0)."""
    return FreeComplex(spec, ((0, (0,)),), ())


def free_module_complex(spec: AlgebraSpec, internal_degrees,
                        chain_degree: int = 0) -> FreeComplex:
    degs = tuple(internal_degrees)
    if not degs:
        return zero_complex(spec)
    return FreeComplex(spec, ((chain_degree, degs),), ())


# -- chain maps ---------------------------------------------------------------


@dataclass(frozen=True)
class ChainMap:
    """Degree-preserving map of complexes; commutes with differentials exactly.

    blocks: ((chain degree c, ((row, col, element), ...)), ...) with the block
    at c mapping source generators at c to target generators at c.
    """

    source: FreeComplex
    target: FreeComplex
    blocks: tuple

    def __post_init__(self):
        if self.source.spec != self.target.spec:
            raise SpecMismatch("chain map endpoints over different specs")
        spec = self.source.spec
        blocks = dict(self.blocks)
        if list(self.blocks) != sorted(self.blocks):
            raise ValueError("blocks must be sorted by chain degree")
        for c, entries in self.blocks:
            src = self.source.gens_at(c)
            tgt = self.target.gens_at(c)
            for i, j, f in entries:
                if not (0 <= i < len(tgt) and 0 <= j < len(src)):
                    raise ValueError(f"block ({i},{j}) out of range at chain {c}")
                if not f:
                    raise ValueError("zero entries must not be stored")
                deg = alg.element_degree(spec, f)
                if deg != src[j] - tgt[i]:
                    raise ValueError("non-homogeneous chain map entry")
        chains = set(blocks) | {c for c, _ in self.source.differentials}
        for c in chains:
            lhs = _compose_blocks(spec, self.target.diff_at(c),
                                  blocks.get(c, ()))
            rhs = _compose_blocks(spec, blocks.get(c - 1, ()),
                                  self.source.diff_at(c))
            if lhs != rhs:
                raise ValueError(f"chain map does not commute at chain {c}")

    def block_at(self, c: int) -> tuple:
        for cc, entries in self.blocks:
            if cc == c:
                return entries
        return ()


def identity_map(x: FreeComplex) -> ChainMap:
    one = alg.one_element(x.spec)
    blocks = tuple(
        (c, tuple((k, k, one) for k in range(len(degs))))
        for c, degs in x.generators
    )
    return ChainMap(x, x, blocks)


def zero_map(x: FreeComplex, y: FreeComplex) -> ChainMap:
    return ChainMap(x, y, ())


def internal_twist(x: FreeComplex, t: int) -> FreeComplex:
    """Shift every generator's internal degree by t; differentials unchanged."""
    gens = tuple((c, tuple(d + t for d in degs)) for c, degs in x.generators)
    return FreeComplex(x.spec, gens, x.differentials)


def multiplication_map(z: Element, x: FreeComplex) -> ChainMap:
    """Multiplication by a homogeneous element z, as a map twist(x, deg z) -> x."""
    spec = x.spec
    if not z:
        return zero_map(x, x)
    delta = alg.element_degree(spec, z)
    src = internal_twist(x, delta)
    blocks = tuple(
        (c, tuple((k, k, z) for k in range(len(degs))))
        for c, degs in x.generators
    )
    return ChainMap(src, x, blocks)


def shift(x: FreeComplex, s: int) -> FreeComplex:
    """Chain-degree shift by s; differentials pick up the sign (-1)^s."""
    if s == 0:
        return x
    spec = x.spec
    gens = tuple(sorted((c + s, degs) for c, degs in x.generators))
    sign = 1 if s % 2 == 0 else -1
    diffs = []
    for c, entries in x.differentials:
        if sign == 1:
            diffs.append((c + s, entries))
        else:
            diffs.append((c + s, tuple(
                (i, j, alg.element_neg(spec, f)) for i, j, f in entries
            )))
    return FreeComplex(spec, gens, tuple(sorted(diffs)))


def shift_map(phi: ChainMap, s: int) -> ChainMap:
    """The same blocks between shifted complexes (still a chain map)."""
    return ChainMap(
        shift(phi.source, s),
        shift(phi.target, s),
        tuple(sorted((c + s, entries) for c, entries in phi.blocks)),
    )


def direct_sum(x: FreeComplex, y: FreeComplex) -> FreeComplex:
    alg.check_same_spec(x.spec, y.spec)
    spec = x.spec
    chains = sorted({c for c, _ in x.generators} | {c for c, _ in y.generators})
    gens = {}
    for c in chains:
        gens[c] = tuple(x.gens_at(c)) + tuple(y.gens_at(c))
    diffs = {}
    for c in sorted({c for c, _ in x.differentials} |
                    {c for c, _ in y.differentials}):
        entries = list(x.diff_at(c))
        ox_src, ox_tgt = len(x.gens_at(c)), len(x.gens_at(c - 1))
        entries += [(i + ox_tgt, j + ox_src, f) for i, j, f in y.diff_at(c)]
        diffs[c] = {(i, j): f for i, j, f in entries}
    return build_complex(spec, gens, diffs)


def sum_map(phi: ChainMap, psi: ChainMap) -> ChainMap:
    src = direct_sum(phi.source, psi.source)
    tgt = direct_sum(phi.target, psi.target)
    blocks = {}
    chains = {c for c, _ in phi.blocks} | {c for c, _ in psi.blocks}
    for c in sorted(chains):
        entries = list(phi.block_at(c))
        o_src = len(phi.source.gens_at(c))
        o_tgt = len(phi.target.gens_at(c))
        entries += [(i + o_tgt, j + o_src, f) for i, j, f in psi.block_at(c)]
        blocks[c] = tuple(sorted(entries, key=lambda e: (e[0], e[1])))
    return ChainMap(src, tgt, tuple(sorted(blocks.items())))


def cone(phi: ChainMap) -> FreeComplex:
    """Mapping cone: generators Y_c + X_{c-1}, differential [[d_Y, phi], [0, -d_X]]."""
    x, y, spec = phi.source, phi.target, phi.source.spec
    chains = sorted(
        {c for c, _ in y.generators} | {c + 1 for c, _ in x.generators}
    )
    gens = {c: tuple(y.gens_at(c)) + tuple(x.gens_at(c - 1)) for c in chains}
    diffs = {}
    cset = sorted(
        {c for c, _ in y.differentials}
        | {c + 1 for c, _ in x.differentials}
        | {c + 1 for c, _ in phi.blocks}
    )
    for c in cset:
        entries = {}
        for i, j, f in y.diff_at(c):
            entries[(i, j)] = f
        oy_src = len(y.gens_at(c))
        oy_tgt = len(y.gens_at(c - 1))
        for i, j, f in phi.block_at(c - 1):
            entries[(i, j + oy_src)] = f
        for i, j, f in x.diff_at(c - 1):
            entries[(i + oy_tgt, j + oy_src)] = alg.element_neg(spec, f)
        diffs[c] = entries
    return build_complex(spec, gens, diffs)


def fiber(phi: ChainMap) -> FreeComplex:
    return shift(cone(phi), -1)


def cone_of_element(z: Element, x: FreeComplex) -> FreeComplex:
    return cone(multiplication_map(z, x))


def tensor(x: FreeComplex, y: FreeComplex) -> FreeComplex:
    """Total complex of the double complex, Koszul sign on the right factor.

    Both inputs are free, hence cofibrant, so this computes the derived
    product.  Generator internal degrees add.
    """
    alg.check_same_spec(x.spec, y.spec)
    spec = x.spec
    x_chains = [c for c, _ in x.generators]
    y_chains = [c for c, _ in y.generators]
    if not x_chains or not y_chains:
        return zero_complex(spec)

    def index_maps(c):
        """Deterministic basis of (X ox Y)_c: cx ascending, then jx, then jy."""
        out = []
        for cx in x_chains:
            cy = c - cx
            ydegs = y.gens_at(cy)
            if not ydegs:
                continue
            xdegs = x.gens_at(cx)
            for jx, a in enumerate(xdegs):
                for jy, b in enumerate(ydegs):
                    out.append((cx, jx, jy, a + b))
        return out

    chains = sorted({cx + cy for cx in x_chains for cy in y_chains})
    gens = {}
    basis_index = {}
    for c in chains:
        basis = index_maps(c)
        gens[c] = tuple(d for _, _, _, d in basis)
        basis_index[c] = {(cx, jx, jy): k for k, (cx, jx, jy, _) in enumerate(basis)}
    diffs = {}
    for c in chains:
        if c - 1 not in basis_index:
            continue
        entries = {}
        tgt_index = basis_index[c - 1]
        for cx in x_chains:
            cy = c - cx
            ydegs = y.gens_at(cy)
            if not ydegs:
                continue
            xdegs = x.gens_at(cx)
            # d_X ox 1
            for i, j, f in x.diff_at(cx):
                for jy in range(len(ydegs)):
                    src = basis_index[c][(cx, j, jy)]
                    tgt = tgt_index.get((cx - 1, i, jy))
                    if tgt is not None:
                        key = (tgt, src)
                        cur = entries.get(key)
                        entries[key] = alg.element_add(spec, cur, f) if cur else f
            # (-1)^cx 1 ox d_Y
            sign = 1 if cx % 2 == 0 else -1
            for i, j, f in y.diff_at(cy):
                g = f if sign == 1 else alg.element_neg(spec, f)
                for jx in range(len(xdegs)):
                    src = basis_index[c][(cx, jx, j)]
                    tgt = tgt_index.get((cx, jx, i))
                    if tgt is not None:
                        key = (tgt, src)
                        cur = entries.get(key)
                        entries[key] = alg.element_add(spec, cur, g) if cur else g
        diffs[c] = {k: v for k, v in entries.items() if v}
    return build_complex(spec, gens, diffs)


def tensor_map(phi: ChainMap, psi: ChainMap) -> ChainMap:
    """phi ox psi between tensor products (chain maps carry no Koszul sign)."""
    src = tensor(phi.source, psi.source)
    tgt = tensor(phi.target, psi.target)
    spec = src.spec

    # Rebuild the same deterministic indexing used by tensor().
    def indexer(xc: FreeComplex, yc: FreeComplex):
        table = {}
        x_chains = [c for c, _ in xc.generators]
        for c in {cx + cy for cx in x_chains for cy, _ in yc.generators}:
            idx = {}
            k = 0
            for cx in x_chains:
                ydegs = yc.gens_at(c - cx)
                if not ydegs:
                    continue
                for jx in range(len(xc.gens_at(cx))):
                    for jy in range(len(ydegs)):
                        idx[(cx, jx, jy)] = k
                        k += 1
            table[c] = idx
        return table

    src_idx = indexer(phi.source, psi.source)
    tgt_idx = indexer(phi.target, psi.target)
    blocks = {}
    for c, sidx in src_idx.items():
        tidx = tgt_idx.get(c)
        if not tidx:
            continue
        entries = {}
        for cx in sorted({k[0] for k in sidx}):
            pblock = phi.block_at(cx)
            qblock = psi.block_at(c - cx)
            for ip, jp, f in pblock:
                for iq, jq, g in qblock:
                    prod = alg.algebra_mul(spec, f, g)
                    if not prod:
                        continue
                    s = sidx.get((cx, jp, jq))
                    t = tidx.get((cx, ip, iq))
                    if s is None or t is None:
                        continue
                    cur = entries.get((t, s))
                    acc = alg.element_add(spec, cur, prod) if cur else prod
                    if acc:
                        entries[(t, s)] = acc
                    elif cur:
                        del entries[(t, s)]
        if entries:
            blocks[c] = _dict_to_entries(spec, entries)
    return ChainMap(src, tgt, tuple(sorted(blocks.items())))


def compose_maps(phi: ChainMap, psi: ChainMap) -> ChainMap:
    """phi o psi (psi first)."""
    if psi.target != phi.source:
        raise SpecMismatch("composition endpoints do not match")
    spec = phi.source.spec
    blocks = {}
    for c, _ in psi.blocks:
        prod = _compose_blocks(spec, phi.block_at(c), psi.block_at(c))
        if prod:
            blocks[c] = _dict_to_entries(spec, prod)
    return ChainMap(psi.source, phi.target, tuple(sorted(blocks.items())))


# -- homology -----------------------------------------------------------------


@lru_cache(maxsize=None)
def slice_basis(x: FreeComplex, c: int, d: int) -> tuple:
    """Basis of the (c, d) slice: (generator index, monomial) pairs."""
    out = []
    for j, a in enumerate(x.gens_at(c)):
        for m in alg.monomial_basis(x.spec, d - a):
            out.append((j, m))
    return tuple(out)


def _slice_matrix(x: FreeComplex, entries, src_basis, tgt_basis, d: int):
    """Scalar matrix of a block on monomial-coordinate bases."""
    ring = x.spec.ring
    tgt_index = {bm: k for k, bm in enumerate(tgt_basis)}
    zero = ring.zero()
    rows = [[zero] * len(src_basis) for _ in tgt_basis]
    by_col = {}
    for i, j, f in entries:
        by_col.setdefault(j, []).append((i, f))
    for col, (j, m) in enumerate(src_basis):
        for i, f in by_col.get(j, ()):
            for mono, coef in f:
                prod = alg.monomial_mul(x.spec, mono, m)
                if prod is None:
                    continue
                row = tgt_index.get((i, prod))
                if row is not None:
                    rows[row][col] = ring.add(rows[row][col], coef)
    return rows


@dataclass(frozen=True)
class SlicePresentation:
    """H at one bidegree, presented on a kernel basis of the outgoing
    differential with relations from the incoming one."""

    ring: object
    num_gens: int
    kernel: tuple          # columns, in slice coordinates
    coord_rows: tuple      # rows extracting kernel coordinates
    relations: tuple       # relation columns in kernel coordinates

    @property
    def descriptor(self) -> Descriptor:
        return descriptor_from_relations(self.num_gens, self.relations, self.ring)


@lru_cache(maxsize=None)
def slice_presentation(x: FreeComplex, c: int, d: int) -> SlicePresentation:
    ring = x.spec.ring
    basis = slice_basis(x, c, d)
    if not basis:
        return SlicePresentation(ring, 0, (), (), ())
    below = slice_basis(x, c - 1, d)
    out_matrix = _slice_matrix(x, x.diff_at(c), basis, below, d)
    if below:
        dec = smith_normal_form(out_matrix, ring)
        kernel = dec.kernel_basis()
        coord_rows = dec.kernel_coordinate_rows()
    else:
        n = len(basis)
        one, zero = ring.one(), ring.zero()
        kernel = tuple(
            tuple(one if i == k else zero for i in range(n)) for k in range(n)
        )
        coord_rows = kernel
    m = len(kernel)
    above = slice_basis(x, c + 1, d)
    relations = ()
    if m and above:
        in_matrix = _slice_matrix(x, x.diff_at(c + 1), above, basis, d)
        rel = []
        for col in range(len(above)):
            vec = tuple(in_matrix[r][col] for r in range(len(basis)))
            coords = tuple(
                _dot(ring, row, vec) for row in coord_rows
            )
            if any(v != 0 for v in coords):
                rel.append(coords)
        relations = tuple(rel)
    return SlicePresentation(ring, m, kernel, coord_rows, relations)


def _dot(ring, row, vec):
    acc = ring.zero()
    for a, b in zip(row, vec):
        if a != 0 and b != 0:
            acc = ring.add(acc, ring.mul(a, b))
    return acc


def induced_slice_matrix(phi: ChainMap, c: int, d: int,
                         src_pres: SlicePresentation,
                         tgt_pres: SlicePresentation):
    """Matrix of H(phi) at one bidegree, in kernel coordinates."""
    ring = phi.source.spec.ring
    if src_pres.num_gens == 0 or tgt_pres.num_gens == 0:
        return tuple(tuple() for _ in range(tgt_pres.num_gens))
    src_basis = slice_basis(phi.source, c, d)
    tgt_basis = slice_basis(phi.target, c, d)
    block = _slice_matrix(phi.source, phi.block_at(c), src_basis, tgt_basis, d)
    # image of each kernel-basis vector, then its target kernel coordinates
    cols = []
    for kvec in src_pres.kernel:
        img = tuple(_dot(ring, row, kvec) for row in block)
        cols.append(tuple(_dot(ring, row, img) for row in tgt_pres.coord_rows))
    return tuple(
        tuple(cols[j][i] for j in range(len(cols)))
        for i in range(tgt_pres.num_gens)
    )


@dataclass(frozen=True)
class HomologyTable:
    """Nonzero bidegree descriptors of homology inside a window.

    Over Z_(p) a descriptor (r, (k1, k2, ...)) means coefficient groups
    Z_(p)^r + Z/p^k1 + ...; over a field the descriptor is (dim, ()).
    """

    ring_name: str
    entries: tuple  # (((c, d), (rank, torsion)), ...) sorted

    def get(self, c: int, d: int) -> Descriptor:
        for (cc, dd), desc in self.entries:
            if (cc, dd) == (c, d):
                return desc
        return ZERO_DESCRIPTOR

    def is_empty(self) -> bool:
        return not self.entries

    def bidegrees(self) -> tuple:
        return tuple(bd for bd, _ in self.entries)

    def shifted(self, s: int) -> "HomologyTable":
        return HomologyTable(
            self.ring_name,
            tuple(sorted((((c + s, d), desc) for (c, d), desc in self.entries))),
        )

    def added(self, other: "HomologyTable") -> "HomologyTable":
        acc = dict(self.entries)
        for bd, (r, tors) in other.entries:
            r0, t0 = acc.get(bd, ZERO_DESCRIPTOR)
            acc[bd] = (r0 + r, tuple(sorted(t0 + tors)))
        return HomologyTable(self.ring_name, tuple(sorted(acc.items())))


def table_from_entries(ring, entries) -> HomologyTable:
    clean = tuple(
        sorted((bd, desc) for bd, desc in entries if desc != ZERO_DESCRIPTOR)
    )
    return HomologyTable(ring.name, clean)


def support_degrees(x: FreeComplex, c: int, lo: int, hi: int):
    """Internal degrees in [lo, hi] where the chain-c slice is nonzero."""
    degs = set()
    for a in x.gens_at(c):
        d = max(lo, a)
        while d <= hi:
            if alg.monomial_basis(x.spec, d - a):
                degs.add(d)
            d += 1
    return sorted(degs)


def homology(x: FreeComplex, w: DegreeWindow) -> HomologyTable:
    """Bidegree-wise homology inside the window, exact for the full ring."""
    entries = []
    for c in range(w.c_lo, w.c_hi + 1):
        if not x.gens_at(c):
            continue
        for d in support_degrees(x, c, w.lo, w.hi):
            desc = slice_presentation(x, c, d).descriptor
            if desc != ZERO_DESCRIPTOR:
                entries.append(((c, d), desc))
    return table_from_entries(x.spec.ring, entries)


# -- zero tests and witnesses ---------------------------------------------------


@dataclass(frozen=True)
class ZeroStatus:
    """Result of a windowed vanishing test.

    kind is 'zero', 'witness' or 'inconclusive'.  A 'zero' verdict is a
    certificate about the window only, never an absolute claim.  'stage'
    records the colimit stage at which ind-object verdicts stabilized.
    """

    kind: str
    bidegree: tuple = ()
    descriptor: tuple = ()
    reason: str = ""
    stage: int = 0

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_witness(self) -> bool:
        return self.kind == "witness"


ZERO = ZeroStatus("zero")


def is_zero_in_window(x, w: DegreeWindow, cutoff: int = 8,
                      consecutive: int = 2) -> ZeroStatus:
    """ZeroInWindow or the lexicographically first nonzero bidegree."""
    if isinstance(x, IndComplex):
        return ind_is_zero(x, w, cutoff, consecutive)
    for c in range(w.c_lo, w.c_hi + 1):
        if not x.gens_at(c):
            continue
        for d in support_degrees(x, c, w.lo, w.hi):
            desc = slice_presentation(x, c, d).descriptor
            if desc != ZERO_DESCRIPTOR:
                return ZeroStatus("witness", (c, d), desc)
    return ZERO


# -- ind-objects ----------------------------------------------------------------


@dataclass(frozen=True)
class IndComplex:
    """Directed system of free complexes, described structurally.

    kind: 'telescope' (constant stages of `base` with self-map `phi`),
    'tel_cofiber' (stages cone(z^s) with transitions (z, 1)), 'tensor', 'sum',
    'shift', or 'constant'.  Stages and transition chain maps are derived on
    demand and memoized; transitions are validated chain maps, so the colimit
    data is audited exactly.
    """

    kind: str
    base: object = None          # FreeComplex for telescope/tel_cofiber/constant
    phi: object = None           # ChainMap for telescope
    element: tuple = None        # Element for tel_cofiber
    left: object = None          # FreeComplex | IndComplex
    right: object = None
    offset: int = 0

    @property
    def spec(self) -> AlgebraSpec:
        if self.kind in ("telescope", "tel_cofiber", "constant"):
            return self.base.spec
        if self.kind == "shift":
            return self.left.spec
        return self.left.spec


def telescope(base: FreeComplex, phi: ChainMap) -> IndComplex:
    if phi.source != base or phi.target != base:
        raise SpecMismatch("telescope needs a self-map")
    return IndComplex("telescope", base=base, phi=phi)


def telescope_of_element(z: Element, base: FreeComplex) -> IndComplex:
    spec = base.spec
    if z and alg.element_degree(spec, z) != 0:
        raise ValueError("telescope self-maps must preserve internal degree")
    return telescope(base, _degree_zero_mult(z, base))


def _degree_zero_mult(z: Element, x: FreeComplex) -> ChainMap:
    if not z:
        return zero_map(x, x)
    blocks = tuple(
        (c, tuple((k, k, z) for k in range(len(degs))))
        for c, degs in x.generators
    )
    return ChainMap(x, x, blocks)


def telescope_cofiber(z: Element, base: FreeComplex) -> IndComplex:
    """Colimit of cone(z^s) along (multiply by z, identity); stage s presents
    the z^s-torsion quotient of the telescope construction.  A zero element is
    legal (it arises under coefficient maps killing z) and gives constant
    stages base + shifted base from stage one on."""
    spec = base.spec
    if z and alg.element_degree(spec, z) != 0:
        raise ValueError("tel_cofiber needs a degree-zero element")
    return IndComplex("tel_cofiber", base=base, element=z)


def constant_ind(x: FreeComplex) -> IndComplex:
    return IndComplex("constant", base=x)


def ind_tensor(a, b) -> IndComplex:
    return IndComplex("tensor", left=a, right=b)


def ind_sum(a, b) -> IndComplex:
    return IndComplex("sum", left=a, right=b)


def ind_shift(a: IndComplex, s: int) -> IndComplex:
    return IndComplex("shift", left=a, offset=s)


def _as_ind(x) -> IndComplex:
    return x if isinstance(x, IndComplex) else constant_ind(x)


@lru_cache(maxsize=None)
def ind_stage(ind: IndComplex, s: int) -> FreeComplex:
    if ind.kind == "constant":
        return ind.base
    if ind.kind == "telescope":
        return ind.base
    if ind.kind == "tel_cofiber":
        z_pow = alg.element_pow(ind.base.spec, ind.element, s)
        return cone(_degree_zero_mult(z_pow, ind.base))
    if ind.kind == "shift":
        return shift(ind_stage(ind.left, s), ind.offset)
    if ind.kind == "tensor":
        return tensor(ind_stage(_as_ind(ind.left), s),
                      ind_stage(_as_ind(ind.right), s))
    if ind.kind == "sum":
        return direct_sum(ind_stage(_as_ind(ind.left), s),
                          ind_stage(_as_ind(ind.right), s))
    raise ValueError(ind.kind)


@lru_cache(maxsize=None)
def ind_transition(ind: IndComplex, s: int) -> ChainMap:
    """Chain map from stage s to stage s + 1."""
    if ind.kind == "constant":
        return identity_map(ind.base)
    if ind.kind == "telescope":
        return ind.phi
    if ind.kind == "tel_cofiber":
        spec = ind.base.spec
        src, tgt = ind_stage(ind, s), ind_stage(ind, s + 1)
        z = ind.element
        one = alg.one_element(spec)
        blocks = {}
        for c, degs in src.generators:
            n_base = len(ind.base.gens_at(c))
            entries = []
            for k in range(len(degs)):
                if k < n_base:
                    if z:
                        entries.append((k, k, z))   # multiply on the target copy
                else:
                    entries.append((k, k, one))
            if entries:
                blocks[c] = tuple(entries)
        return ChainMap(src, tgt, tuple(sorted(blocks.items())))
    if ind.kind == "shift":
        return shift_map(ind_transition(ind.left, s), ind.offset)
    if ind.kind == "tensor":
        return tensor_map(ind_transition(_as_ind(ind.left), s),
                          ind_transition(_as_ind(ind.right), s))
    if ind.kind == "sum":
        return sum_map(ind_transition(_as_ind(ind.left), s),
                       ind_transition(_as_ind(ind.right), s))
    raise ValueError(ind.kind)


@dataclass(frozen=True)
class SliceColimit:
    """Stabilization verdict for one bidegree of a directed system.

    kind 'zero'/'nonzero': every probed stage's eventual image stabilized at
    the reported descriptor; 'inconclusive' when the cutoff was hit first.
    """

    kind: str
    descriptor: tuple = ZERO_DESCRIPTOR
    stage: int = 0
    uniform: bool = True


def _slice_colimit(ind: IndComplex, c: int, d: int, cutoff: int,
                   consecutive: int) -> SliceColimit:
    ring = ind.spec.ring
    pres = [slice_presentation(ind_stage(ind, s), c, d) for s in range(cutoff + 1)]
    if all(p.descriptor == ZERO_DESCRIPTOR for p in pres):
        return SliceColimit("zero", stage=0)
    steps = []
    for s in range(cutoff):
        steps.append(induced_slice_matrix(
            ind_transition(ind, s), c, d, pres[s], pres[s + 1]
        ))

    composites = {}

    def composite(s, t):
        # matrix of the map stage s -> stage t in kernel coordinates
        if (s, t) in composites:
            return composites[(s, t)]
        if t == s:
            n = pres[s].num_gens
            one, zero = ring.one(), ring.zero()
            mat = tuple(tuple(one if i == j else zero for j in range(n))
                        for i in range(n))
        else:
            prev = composite(s, t - 1)
            step = steps[t - 1]
            mat = tuple(
                tuple(_dot(ring, row, tuple(prev[k][j] for k in range(len(prev))))
                      for j in range(pres[s].num_gens))
                for row in step
            )
        composites[(s, t)] = mat
        return mat

    def image_desc(s, t):
        mat = composite(s, t)
        cols = [tuple(mat[i][j] for i in range(pres[t].num_gens))
                for j in range(pres[s].num_gens)]
        return image_descriptor(cols, pres[t].relations, pres[t].num_gens, ring)

    eventual = []
    for s in range(cutoff + 1):
        run, value, at = 0, None, None
        found = None
        for t in range(s, cutoff + 1):
            desc = image_desc(s, t)
            if desc == value:
                run += 1
            else:
                value, run, at = desc, 1, t
            if run >= consecutive:
                found = (value, at)
                break
        if found is None:
            break
        eventual.append(found)
    if not eventual:
        return SliceColimit("inconclusive")
    first_nonzero = next(
        ((v, at) for v, at in eventual if v != ZERO_DESCRIPTOR), None
    )
    if first_nonzero is not None:
        uniform = all(v == first_nonzero[0] for v, _ in eventual)
        return SliceColimit("nonzero", first_nonzero[0],
                            max(at for _, at in eventual), uniform)
    if len(eventual) < consecutive:
        return SliceColimit("inconclusive")
    return SliceColimit("zero", stage=max(at for _, at in eventual))


def _ind_support(ind: IndComplex, w: DegreeWindow, cutoff: int):
    """Bidegrees to probe: union of stage supports (stages share patterns)."""
    seen = {}
    for s in (0, 1, cutoff):
        x = ind_stage(ind, s)
        for c in range(w.c_lo, w.c_hi + 1):
            if not x.gens_at(c):
                continue
            for d in support_degrees(x, c, w.lo, w.hi):
                seen.setdefault((c, d), True)
    return sorted(seen)


def ind_is_zero(ind: IndComplex, w: DegreeWindow, cutoff: int = 8,
                consecutive: int = 2) -> ZeroStatus:
    """Colimit vanishing in the window via per-slice stabilization."""
    worst_stage = 0
    inconclusive = None
    for (c, d) in _ind_support(ind, w, cutoff):
        res = _slice_colimit(ind, c, d, cutoff, consecutive)
        if res.kind == "nonzero":
            return ZeroStatus("witness", (c, d), res.descriptor, stage=res.stage)
        if res.kind == "inconclusive" and inconclusive is None:
            inconclusive = (c, d)
        worst_stage = max(worst_stage, res.stage)
    if inconclusive is not None:
        return ZeroStatus("inconclusive",
                          reason=f"no stabilization at {inconclusive} "
                                 f"within cutoff {cutoff}")
    return ZeroStatus("zero", stage=worst_stage)


@dataclass(frozen=True)
class StabilizationReport:
    """Per-run colimit bookkeeping: deepest stage used and failures."""

    max_stage: int
    inconclusive: tuple  # bidegrees
    nonuniform: tuple    # bidegrees where per-stage limits disagreed

    @property
    def ok(self) -> bool:
        return not self.inconclusive and not self.nonuniform


def ind_homology(ind: IndComplex, w: DegreeWindow, cutoff: int = 8,
                 consecutive: int = 2):
    """Colimit homology table plus a stabilization report."""
    entries = []
    max_stage = 0
    bad, nonuniform = [], []
    for (c, d) in _ind_support(ind, w, cutoff):
        res = _slice_colimit(ind, c, d, cutoff, consecutive)
        max_stage = max(max_stage, res.stage)
        if res.kind == "inconclusive":
            bad.append((c, d))
        elif res.kind == "nonzero":
            if not res.uniform:
                nonuniform.append((c, d))
            entries.append(((c, d), res.descriptor))
    table = table_from_entries(ind.spec.ring, entries)
    return table, StabilizationReport(max_stage, tuple(bad), tuple(nonuniform))


def telescope_homology(x: FreeComplex, f: ChainMap, w: DegreeWindow,
                       cutoff: int = 8, consecutive: int = 2):
    """Directed-colimit homology of iterates of a self-map."""
    return ind_homology(telescope(x, f), w, cutoff, consecutive)
