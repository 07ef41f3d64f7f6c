"""Exact scalar arithmetic over F_p, Q and Z_(p), and p-local Smith normal form.

Scalars are plain Python values: residues (int) over F_p, Fraction over Q and
Z_(p).  Fraction keeps values in lowest terms with positive denominator, so
scalar equality is structural equality of canonical forms.  All linear algebra
here is exact; no floating point appears anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import NonInvertibleDenominator

Scalar = Union[int, Fraction]

FP = "fp"
RATIONAL = "rational"
P_LOCAL = "p_local"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class CoefficientRing:
    """One of F_p, Q, or the p-local integers Z_(p)."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in (FP, RATIONAL, P_LOCAL):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == RATIONAL:
            if self.p != 0:
                raise ValueError("rational ring carries no prime")
        elif not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @staticmethod
    def fp(p: int) -> "CoefficientRing":
        return CoefficientRing(FP, p)

    @staticmethod
    def rational() -> "CoefficientRing":
        return CoefficientRing(RATIONAL)

    @staticmethod
    def p_local(p: int) -> "CoefficientRing":
        return CoefficientRing(P_LOCAL, p)

    @property
    def is_field(self) -> bool:
        return self.kind in (FP, RATIONAL)

    @property
    def name(self) -> str:
        if self.kind == FP:
            return f"F{self.p}"
        if self.kind == RATIONAL:
            return "Q"
        return f"Z({self.p})"

    # -- element constructors ------------------------------------------------

    def zero(self) -> Scalar:
        return 0 if self.kind == FP else Fraction(0)

    def one(self) -> Scalar:
        return 1 if self.kind == FP else Fraction(1)

    def from_int(self, n: int) -> Scalar:
        return n % self.p if self.kind == FP else Fraction(n)

    def normalize(self, num: int, den: int = 1) -> Scalar:
        """Canonical scalar from a numerator/denominator pair.

        Raises NonInvertibleDenominator when the reduced denominator is not a
        unit: divisible by p over Z_(p), congruent to 0 over F_p.
        """
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        if self.kind == FP:
            d = den % self.p
            if d == 0:
                raise NonInvertibleDenominator(f"{den} is not invertible mod {self.p}")
            return (num * pow(d, -1, self.p)) % self.p
        q = Fraction(num, den)
        if self.kind == P_LOCAL and q.denominator % self.p == 0:
            raise NonInvertibleDenominator(
                f"{num}/{den} is not p-local at p={self.p}"
            )
        return q

    def check(self, a: Scalar) -> Scalar:
        """Validate that a scalar value is legal for this ring."""
        if self.kind == FP:
            if not isinstance(a, int):
                raise TypeError(f"F_p scalar must be int, got {a!r}")
            return a % self.p
        if not isinstance(a, Fraction):
            if isinstance(a, int):
                return Fraction(a)
            raise TypeError(f"scalar must be Fraction, got {a!r}")
        if self.kind == P_LOCAL and a.denominator % self.p == 0:
            raise NonInvertibleDenominator(f"{a} is not p-local at p={self.p}")
        return a

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return (a + b) % self.p if self.kind == FP else a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return (a - b) % self.p if self.kind == FP else a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return (a * b) % self.p if self.kind == FP else a * b

    def neg(self, a: Scalar) -> Scalar:
        return (-a) % self.p if self.kind == FP else -a

    def is_zero(self, a: Scalar) -> bool:
        return a == 0

    def is_unit(self, a: Scalar) -> bool:
        if a == 0:
            return False
        if self.kind == P_LOCAL:
            return a.numerator % self.p != 0
        return True

    def invert(self, a: Scalar) -> Scalar:
        if not self.is_unit(a):
            raise NonInvertibleDenominator(f"{a} is not a unit in {self.name}")
        if self.kind == FP:
            return pow(a, -1, self.p)
        return 1 / a

    def divide_exact(self, a: Scalar, b: Scalar) -> Scalar:
        """a / b when the quotient is legal in the ring; raises otherwise."""
        if b == 0:
            raise ZeroDivisionError
        if self.kind == FP:
            return (a * pow(b, -1, self.p)) % self.p
        q = a / b
        if self.kind == P_LOCAL and q.denominator % self.p == 0:
            raise ArithmeticError(f"{a}/{b} leaves {self.name}")
        return q

    def valuation(self, a: Scalar):
        """p-adic valuation; over a field every nonzero scalar has valuation 0."""
        if a == 0:
            return None
        if self.kind != P_LOCAL:
            return 0
        n, v = abs(a.numerator), 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        return v

    def unit_part(self, a: Scalar) -> Scalar:
        v = self.valuation(a)
        if v is None:
            raise ZeroDivisionError("zero has no unit part")
        if self.kind != P_LOCAL or v == 0:
            return a
        return a / Fraction(self.p) ** v

    # -- maps between rings --------------------------------------------------

    def residue_ring(self) -> "CoefficientRing":
        if self.kind != P_LOCAL:
            raise ValueError("residue ring only defined for Z_(p)")
        return CoefficientRing.fp(self.p)

    def reduce_mod_p(self, a: Scalar) -> int:
        """Z_(p) -> F_p, using that the denominator is a unit."""
        if self.kind != P_LOCAL:
            raise ValueError("reduce_mod_p needs a p-local scalar")
        return (a.numerator * pow(a.denominator, -1, self.p)) % self.p

    def lift_from_fp(self, a: int) -> Fraction:
        """F_p -> Z_(p) by the canonical representative in [0, p)."""
        return Fraction(a % self.p)


# -- matrices ---------------------------------------------------------------

Matrix = tuple  # tuple of row tuples


def matrix_from_rows(rows: Iterable[Sequence[Scalar]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity_matrix(n: int, ring: CoefficientRing) -> Matrix:
    one, zero = ring.one(), ring.zero()
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def zero_matrix(nrows: int, ncols: int, ring: CoefficientRing) -> Matrix:
    zero = ring.zero()
    return tuple(tuple(zero for _ in range(ncols)) for _ in range(nrows))


def mat_mul(a: Matrix, b: Matrix, ring: CoefficientRing) -> Matrix:
    if not a or not b:
        return tuple(tuple() for _ in a)
    n, m, k = len(a), len(b[0]), len(b)
    zero = ring.zero()
    out = []
    for i in range(n):
        row_a = a[i]
        row = [zero] * m
        for t in range(k):
            x = row_a[t]
            if x == 0:
                continue
            row_b = b[t]
            for j in range(m):
                y = row_b[j]
                if y != 0:
                    row[j] = ring.add(row[j], ring.mul(x, y))
        out.append(tuple(row))
    return tuple(out)


def mat_vec(a: Matrix, v: Sequence[Scalar], ring: CoefficientRing):
    out = []
    for row in a:
        acc = ring.zero()
        for x, y in zip(row, v):
            if x != 0 and y != 0:
                acc = ring.add(acc, ring.mul(x, y))
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class SparseMatrix:
    """Coordinate-list matrix, entries sorted by (row, col)."""

    nrows: int
    ncols: int
    entries: tuple  # ((row, col, scalar), ...)

    def __post_init__(self):
        seen = set()
        prev = None
        for i, j, v in self.entries:
            if not (0 <= i < self.nrows and 0 <= j < self.ncols):
                raise ValueError(f"entry ({i},{j}) out of range")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry at ({i},{j})")
            if v == 0:
                raise ValueError("zero entries must not be stored")
            if prev is not None and (i, j) < prev:
                raise ValueError("entries must be sorted by (row, col)")
            seen.add((i, j))
            prev = (i, j)

    @staticmethod
    def from_dense(rows: Sequence[Sequence[Scalar]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = tuple(
            (i, j, rows[i][j])
            for i in range(nrows)
            for j in range(ncols)
            if rows[i][j] != 0
        )
        return SparseMatrix(nrows, ncols, entries)

    def dense(self, ring: CoefficientRing) -> Matrix:
        zero = ring.zero()
        rows = [[zero] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries:
            rows[i][j] = v
        return matrix_from_rows(rows)


@dataclass(frozen=True)
class SmithDecomposition:
    """Exact Smith data: left @ diag @ right == input.

    Over Z_(p) the diagonal holds p-powers with ascending exponents; over a
    field it is all ones.  `right` and `right_inverse` expose the column
    transform both ways, which is what kernel computations need.
    """

    ring: CoefficientRing
    nrows: int
    ncols: int
    diagonal: tuple
    left: Matrix
    right: Matrix
    right_inverse: Matrix

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def kernel_basis(self) -> tuple:
        """Columns spanning ker(M), as vectors in source coordinates."""
        cols = []
        for j in range(self.rank, self.ncols):
            cols.append(tuple(self.right_inverse[i][j] for i in range(self.ncols)))
        return tuple(cols)

    def kernel_coordinate_rows(self) -> tuple:
        """Rows extracting kernel-basis coordinates of a kernel vector."""
        return tuple(self.right[i] for i in range(self.rank, self.ncols))

    def reconstruct(self) -> Matrix:
        diag = zero_matrix(self.nrows, self.ncols, self.ring)
        diag = [list(r) for r in diag]
        for k, d in enumerate(self.diagonal):
            diag[k][k] = d
        return mat_mul(mat_mul(self.left, matrix_from_rows(diag), self.ring),
                       self.right, self.ring)


def smith_normal_form(matrix, ring: CoefficientRing) -> SmithDecomposition:
    """Smith normal form over F_p, Q or Z_(p).

    Accepts a SparseMatrix or a dense row sequence.  Pivoting picks the entry
    of minimal p-valuation, ties broken by lowest (row, col), which makes the
    output deterministic and keeps the divisibility chain exact over Z_(p).
    """
    if isinstance(matrix, SparseMatrix):
        dense = matrix.dense(ring)
    else:
        dense = matrix_from_rows(matrix)
    nrows = len(dense)
    ncols = len(dense[0]) if nrows else 0
    d = [list(r) for r in dense]
    left = [list(r) for r in identity_matrix(nrows, ring)]
    right = [list(r) for r in identity_matrix(ncols, ring)]
    right_inv = [list(r) for r in identity_matrix(ncols, ring)]

    def swap_rows(i, j):
        if i == j:
            return
        d[i], d[j] = d[j], d[i]
        for row in left:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in d:
            row[i], row[j] = row[j], row[i]
        right[i], right[j] = right[j], right[i]
        for row in right_inv:
            row[i], row[j] = row[j], row[i]

    def row_add(dst, src, q):
        # row_dst += q * row_src; left (col_src -= q * col_dst)
        if q == 0:
            return
        drow, srow = d[dst], d[src]
        for j in range(ncols):
            if srow[j] != 0:
                drow[j] = ring.add(drow[j], ring.mul(q, srow[j]))
        for row in left:
            row[src] = ring.sub(row[src], ring.mul(q, row[dst]))

    def col_add(dst, src, q):
        # col_dst += q * col_src; right (row_src -= q * row_dst),
        # right_inv (col_dst += q * col_src)
        if q == 0:
            return
        for row in d:
            if row[src] != 0:
                row[dst] = ring.add(row[dst], ring.mul(q, row[src]))
        rsrc, rdst = right[src], right[dst]
        for j in range(ncols):
            rsrc[j] = ring.sub(rsrc[j], ring.mul(q, rdst[j]))
        for row in right_inv:
            row[dst] = ring.add(row[dst], ring.mul(q, row[src]))

    def scale_row(i, u):
        # row_i *= u; left col_i /= u
        inv = ring.invert(u)
        d[i] = [ring.mul(u, x) for x in d[i]]
        for row in left:
            row[i] = ring.mul(row[i], inv)

    k = 0
    limit = min(nrows, ncols)
    while k < limit:
        pivot = None
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                v = d[i][j]
                if v == 0:
                    continue
                val = ring.valuation(v)
                key = (val, i, j)
                if best is None or key < best:
                    best, pivot = key, (i, j)
        if pivot is None:
            break
        swap_rows(k, pivot[0])
        swap_cols(k, pivot[1])
        while True:
            pv = d[k][k]
            for i in range(k + 1, nrows):
                if d[i][k] != 0:
                    row_add(i, k, ring.neg(ring.divide_exact(d[i][k], pv)))
            for j in range(k + 1, ncols):
                if d[k][j] != 0:
                    col_add(j, k, ring.neg(ring.divide_exact(d[k][j], pv)))
            if all(d[i][k] == 0 for i in range(k + 1, nrows)) and all(
                d[k][j] == 0 for j in range(k + 1, ncols)
            ):
                break
        k += 1

    diagonal = []
    for i in range(limit):
        v = d[i][i]
        if v == 0:
            break
        u = ring.unit_part(v) if ring.kind == P_LOCAL else v
        if u != ring.one():
            scale_row(i, ring.invert(u))
        diagonal.append(d[i][i])

    return SmithDecomposition(
        ring=ring,
        nrows=nrows,
        ncols=ncols,
        diagonal=tuple(diagonal),
        left=matrix_from_rows(left),
        right=matrix_from_rows(right),
        right_inverse=matrix_from_rows(right_inv),
    )


# -- finitely presented module descriptors ------------------------------------

Descriptor = tuple  # (free_rank, (torsion exponents ascending))

ZERO_DESCRIPTOR: Descriptor = (0, ())


def descriptor_from_relations(num_gens: int, relation_cols, ring) -> Descriptor:
    """Descriptor of R^num_gens modulo the span of the relation columns.

    Over Z_(p) the result is (free rank, p-power torsion exponents); over a
    field the torsion part is empty and the free rank is the dimension.
    """
    if num_gens == 0:
        return ZERO_DESCRIPTOR
    cols = [c for c in relation_cols]
    if not cols:
        return (num_gens, ())
    rows = [[col[i] for col in cols] for i in range(num_gens)]
    dec = smith_normal_form(rows, ring)
    torsion = []
    if ring.kind == P_LOCAL:
        for v in dec.diagonal:
            e = ring.valuation(v)
            if e:
                torsion.append(e)
    return (num_gens - dec.rank, tuple(sorted(torsion)))


def image_descriptor(generator_cols, relation_cols, ambient_rank: int,
                     ring: CoefficientRing) -> Descriptor:
    """Descriptor of the submodule of R^ambient / span(relations) generated
    by the images of the given columns."""
    g = len(generator_cols)
    if g == 0:
        return ZERO_DESCRIPTOR
    if ambient_rank == 0:
        return ZERO_DESCRIPTOR
    cols = list(generator_cols) + list(relation_cols)
    rows = [[col[i] for col in cols] for i in range(ambient_rank)]
    dec = smith_normal_form(rows, ring)
    relations = [vec[:g] for vec in dec.kernel_basis()]
    return descriptor_from_relations(g, relations, ring)
