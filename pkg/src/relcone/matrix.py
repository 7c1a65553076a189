"""Dense exact matrices over a coefficient ring.

Entries are raw normalized values (int / Fraction / residue int) and the
ring travels with the matrix.  Everything here is small and dense; these
matrices carry boundary and coboundary maps of finite complexes, so
clarity and exactness win over asymptotics.

Shape conventions follow the rest of the package: a map between free
modules is stored as a (target rank) x (source rank) matrix acting on
column vectors.
"""

from __future__ import annotations

from .coeffs import INT, CoeffRing
from .errors import RingMismatch, ShapeMismatch


class Matrix:
    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: CoeffRing, nrows: int, ncols: int, rows):
        if nrows < 0 or ncols < 0:
            raise ShapeMismatch("negative matrix dimension")
        rows = tuple(tuple(ring.normalize(v) for v in r) for r in rows)
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ShapeMismatch(
                f"rows do not match declared shape {nrows}x{ncols}"
            )
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, ring: CoeffRing, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(ring, nrows, ncols, rows)

    @classmethod
    def zeros(cls, ring: CoeffRing, nrows: int, ncols: int) -> "Matrix":
        z = ring.zero()
        return cls(ring, nrows, ncols, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, ring: CoeffRing, n: int) -> "Matrix":
        z, o = ring.zero(), ring.one()
        return cls(
            ring, n, n, [[o if i == j else z for j in range(n)] for i in range(n)]
        )

    @classmethod
    def column(cls, ring: CoeffRing, vec) -> "Matrix":
        return cls(ring, len(vec), 1, [[v] for v in vec])

    # -- basics -------------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def col(self, j: int):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ring, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in r) for r in self.rows)
        return f"Matrix({self.ring}, {self.nrows}x{self.ncols}, [{body}])"

    def is_zero(self) -> bool:
        z = self.ring.zero()
        return all(v == z for r in self.rows for v in r)

    # -- arithmetic ---------------------------------------------------------

    def _check_same(self, other: "Matrix"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        add = self.ring.add
        return Matrix(
            self.ring,
            self.nrows,
            self.ncols,
            [
                [add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(
            self.ring, self.nrows, self.ncols, [[neg(v) for v in r] for r in self.rows]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.ring.normalize(c)
        mul = self.ring.mul
        return Matrix(
            self.ring, self.nrows, self.ncols, [[mul(c, v) for v in r] for r in self.rows]
        )

    def zscale(self, n: int) -> "Matrix":
        zm = self.ring.zmul
        return Matrix(
            self.ring, self.nrows, self.ncols, [[zm(n, v) for v in r] for r in self.rows]
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        add, mul, zero = self.ring.add, self.ring.mul, self.ring.zero()
        ocols = list(zip(*other.rows)) if other.rows else [()] * 0
        out = []
        for r in self.rows:
            row = []
            for c in range(other.ncols):
                acc = zero
                oc = ocols[c] if ocols else ()
                for a, b in zip(r, oc):
                    acc = add(acc, mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(self.ring, self.nrows, other.ncols, out)

    def transpose(self) -> "Matrix":
        rows = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return Matrix(self.ring, self.ncols, self.nrows, rows)

    # -- structural helpers -------------------------------------------------

    def apply(self, vec):
        """Matrix times column vector, returned as a tuple of values."""
        if len(vec) != self.ncols:
            raise ShapeMismatch(f"vector length {len(vec)} vs {self.shape}")
        add, mul, zero = self.ring.add, self.ring.mul, self.ring.zero()
        vec = [self.ring.normalize(v) for v in vec]
        out = []
        for r in self.rows:
            acc = zero
            for a, b in zip(r, vec):
                acc = add(acc, mul(a, b))
            out.append(acc)
        return tuple(out)

    def zapply(self, ring: CoeffRing, vec):
        """Apply an integer matrix to a vector over any module `ring`.

        The matrix must be over Z; entries act through the Z-module
        structure, which is what lets integer coboundary matrices act on
        angle-valued cochains.
        """
        if self.ring != INT:
            raise RingMismatch("zapply needs an integer matrix")
        if len(vec) != self.ncols:
            raise ShapeMismatch(f"vector length {len(vec)} vs {self.shape}")
        vec = [ring.normalize(v) for v in vec]
        out = []
        for r in self.rows:
            acc = ring.zero()
            for a, b in zip(r, vec):
                if a:
                    acc = ring.add(acc, ring.zmul(a, b))
            out.append(acc)
        return tuple(out)

    def change_ring(self, ring: CoeffRing) -> "Matrix":
        return Matrix(ring, self.nrows, self.ncols, self.rows)

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        rows = [[self.rows[i][j] for j in col_idx] for i in row_idx]
        return Matrix(self.ring, len(row_idx), len(col_idx), rows)

    def to_lists(self):
        return [list(r) for r in self.rows]


def hstack(ring: CoeffRing, mats) -> Matrix:
    mats = list(mats)
    if not mats:
        return Matrix.zeros(ring, 0, 0)
    nrows = mats[0].nrows
    for m in mats:
        if m.nrows != nrows:
            raise ShapeMismatch("hstack: row counts differ")
        if m.ring != ring:
            raise RingMismatch("hstack: mixed rings")
    rows = [sum((list(m.rows[i]) for m in mats), []) for i in range(nrows)]
    return Matrix(ring, nrows, sum(m.ncols for m in mats), rows)


def vstack(ring: CoeffRing, mats) -> Matrix:
    mats = list(mats)
    if not mats:
        return Matrix.zeros(ring, 0, 0)
    ncols = mats[0].ncols
    for m in mats:
        if m.ncols != ncols:
            raise ShapeMismatch("vstack: column counts differ")
        if m.ring != ring:
            raise RingMismatch("vstack: mixed rings")
    rows = [r for m in mats for r in m.to_lists()]
    return Matrix(ring, sum(m.nrows for m in mats), ncols, rows)


def block(ring: CoeffRing, grid) -> Matrix:
    """Assemble a block matrix from a 2-d grid of matrices."""
    return vstack(ring, [hstack(ring, row) for row in grid])


def from_int_matrix(m: Matrix, ring: CoeffRing) -> Matrix:
    """Reinterpret an integer matrix over another ring via n -> n.1."""
    if m.ring != INT:
        raise RingMismatch("expected an integer matrix")
    if ring.kind == "U1":
        # Integer matrices act on U1 vectors; they are kept over Z.
        return m
    return m.change_ring(ring)
