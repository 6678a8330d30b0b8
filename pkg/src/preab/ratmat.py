"""Exact rational matrices and subspaces.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Matrices are immutable; empty shapes such as 0x3 and
3x0 are legal and stand for maps into or out of the zero space.

Row reduction is done fraction-free on integer rows and only converted back
to fractions at the end, which keeps the inner loop on plain ``int``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import NoSolution, ShapeMismatch

Scalar = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point entries are not accepted")
    return Fraction(x)


class Matrix:
    """Dense immutable rational matrix."""

    __slots__ = ("nrows", "ncols", "_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(scalar(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ShapeMismatch("column count required for a matrix with no rows")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise ShapeMismatch(f"ragged row: expected {ncols} entries, got {len(row)}")
        self.nrows = len(data)
        self.ncols = ncols
        self._rows = data
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> "Matrix":
        m = cls.__new__(cls)
        m.nrows = len(rows)
        m.ncols = ncols
        m._rows = rows
        m._hash = None
        return m

    # constructors

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls._raw(tuple((_ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(
            tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        cols = [tuple(scalar(x) for x in c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise ShapeMismatch("column length does not match row count")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    # basic access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(
            tuple(tuple(r[j] for r in self._rows) for j in range(self.ncols)), self.nrows
        )

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(tuple(r[j] for j in idx) for r in self._rows), len(idx))

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(self._rows[i] for i in idx), self.ncols)

    # arithmetic

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.ncols
        orows = other._rows
        out = []
        for r in self._rows:
            acc = [_ZERO] * ocols
            for k, a in enumerate(r):
                if a:
                    brow = orows[k]
                    for j in range(ocols):
                        b = brow[j]
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return Matrix._raw(tuple(out), ocols)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._rows), self.ncols)

    def scale(self, c) -> "Matrix":
        c = scalar(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self._rows), self.ncols)

    def _same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ShapeMismatch(f"shape {self.shape} differs from {other.shape}")

    def hstack(self, *others: "Matrix") -> "Matrix":
        return hstack(self, *others)

    def vstack(self, *others: "Matrix") -> "Matrix":
        return vstack(self, *others)

    # equality and display

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ncols == other.ncols and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self._rows))
        return self._hash

    def __repr__(self) -> str:
        if not self.nrows or not self.ncols:
            return f"Matrix.zeros({self.nrows}, {self.ncols})"
        body = "; ".join(", ".join(str(x) for x in r) for r in self._rows)
        return f"Matrix[{body}]"


def hstack(*ms: Matrix) -> Matrix:
    nrows = ms[0].nrows
    for m in ms:
        if m.nrows != nrows:
            raise ShapeMismatch("hstack needs equal row counts")
    rows = tuple(sum((m._rows[i] for m in ms), ()) for i in range(nrows))
    return Matrix._raw(rows, sum(m.ncols for m in ms))


def vstack(*ms: Matrix) -> Matrix:
    ncols = ms[0].ncols
    for m in ms:
        if m.ncols != ncols:
            raise ShapeMismatch("vstack needs equal column counts")
    return Matrix._raw(sum((m._rows for m in ms), ()), ncols)


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    top = hstack(a, Matrix.zeros(a.nrows, b.ncols))
    bottom = hstack(Matrix.zeros(b.nrows, a.ncols), b)
    return vstack(top, bottom)


def kron(a: Matrix, b: Matrix) -> Matrix:
    rows = []
    for ar in a.rows:
        for br in b.rows:
            rows.append(tuple(x * y for x in ar for y in br))
    return Matrix._raw(tuple(rows), a.ncols * b.ncols)


# -- row reduction ---------------------------------------------------------


def _integer_rows(m: Matrix) -> list[list[int]]:
    out = []
    for r in m.rows:
        d = reduce(lcm, (x.denominator for x in r), 1)
        out.append([int(x * d) for x in r])
    return out


def _rref_int(rows: list[list[int]], ncols: int, stop: int | None = None):
    """Fraction-free Gauss-Jordan on integer rows, in place.

    Returns the pivot columns.  Pivot rows keep an integer pivot entry; the
    caller divides through.  ``stop`` limits the columns searched for pivots.
    """
    nrows = len(rows)
    limit = ncols if stop is None else stop
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        p = None
        best = 0
        for i in range(r, nrows):
            v = rows[i][c]
            if v and (p is None or abs(v) < best):
                p, best = i, abs(v)
                if best == 1:
                    break
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        prow = rows[r]
        pv = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            g = gcd(pv, f)
            a, b = pv // g, f // g
            new = [a * x - b * y for x, y in zip(row, prow)]
            g2 = 0
            for x in new:
                if x:
                    g2 = gcd(g2, x)
                    if g2 == 1:
                        break
            if g2 > 1:
                new = [x // g2 for x in new]
            rows[i] = new
        pivots.append(c)
        r += 1
    return pivots


def _normalized(rows: list[list[int]], pivots: list[int], ncols: int) -> list[tuple]:
    out = []
    for i, row in enumerate(rows):
        if i < len(pivots):
            pv = row[pivots[i]]
            out.append(tuple(Fraction(x, pv) for x in row))
        else:
            out.append((_ZERO,) * ncols)
    return out


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and ascending pivot columns."""
    rows = _integer_rows(m)
    pivots = _rref_int(rows, m.ncols)
    return Matrix._raw(tuple(_normalized(rows, pivots, m.ncols)), m.ncols), pivots


def rank(m: Matrix) -> int:
    rows = _integer_rows(m)
    return len(_rref_int(rows, m.ncols))


def kernel_basis(m: Matrix) -> Matrix:
    """Canonical basis (as columns) of the null space of ``m``."""
    r, pivots = rref(m)
    n = m.ncols
    pivset = set(pivots)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = [_ZERO] * n
        v[f] = _ONE
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        vecs.append(v)
    return canonical_basis(Matrix.from_columns(vecs, n))


def canonical_basis(cols: Matrix) -> Matrix:
    """Reduced column echelon form of the span of the columns of ``cols``.

    The result's transpose is in reduced row echelon form, so every basis
    vector has a leading 1 that no other basis vector touches.
    """
    r, pivots = rref(cols.T)
    return r.select_rows(range(len(pivots))).T if pivots else Matrix.zeros(cols.nrows, 0)


def image_basis(m: Matrix) -> Matrix:
    return canonical_basis(m)


def solve_matrix(m: Matrix, b: Matrix) -> Matrix:
    """Particular solution X of ``m @ X == b`` with free variables set to zero."""
    if m.nrows != b.nrows:
        raise ShapeMismatch(f"solve: {m.shape} against right-hand side {b.shape}")
    n = m.ncols
    aug = hstack(m, b)
    rows = _integer_rows(aug)
    pivots = _rref_int(rows, aug.ncols)
    if pivots and pivots[-1] >= n:
        raise NoSolution("right-hand side leaves the column space")
    out = [[_ZERO] * b.ncols for _ in range(n)]
    for i, p in enumerate(pivots):
        row = rows[i]
        pv = row[p]
        out[p] = [Fraction(x, pv) for x in row[n:]]
    return Matrix._raw(tuple(tuple(r) for r in out), b.ncols)


def solve_left(m: Matrix, b: Matrix) -> Matrix:
    """X with ``X @ m == b``."""
    return solve_matrix(m.T, b.T).T


def solve_linear_system(
    shape: tuple[int, int], equations: Sequence[tuple[Matrix, Matrix, Matrix]]
) -> tuple[Matrix, Matrix]:
    """Solve simultaneous equations ``L @ X @ R == C`` for one unknown matrix X.

    Returns a particular solution and a basis (columns) of the homogeneous
    solutions, both in row-major vectorized coordinates for the latter.
    Raises NoSolution when the system is inconsistent.
    """
    nr, nc = shape
    blocks = []
    rhs = []
    for left, right, c in equations:
        # (L X R)[p,q] = sum_{i,j} L[p,i] X[i,j] R[j,q]  ->  kron(L, R^T) vec_rowmajor(X)
        blocks.append(kron(left, right.T))
        rhs.append(Matrix._raw(tuple((x,) for r in c.rows for x in r), 1))
    if not blocks:
        basis = Matrix.identity(nr * nc)
        return Matrix.zeros(nr, nc), basis
    big = vstack(*blocks)
    vec = solve_matrix(big, vstack(*rhs))
    x = Matrix._raw(tuple(tuple(vec[i * nc + j, 0] for j in range(nc)) for i in range(nr)), nc)
    return x, kernel_basis(big)


def unvec(v: Sequence, shape: tuple[int, int]) -> Matrix:
    nr, nc = shape
    return Matrix._raw(tuple(tuple(scalar(v[i * nc + j]) for j in range(nc)) for i in range(nr)), nc)


# -- subspaces --------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n held by its canonical basis."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.nrows != self.ambient_dim:
            raise ShapeMismatch("basis rows must equal the ambient dimension")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Matrix) -> "Subspace":
        if vectors.nrows != ambient_dim:
            raise ShapeMismatch("spanning vectors live in the wrong ambient space")
        return cls(ambient_dim, canonical_basis(vectors))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.zeros(ambient_dim, 0))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.ncols

    def image(self, m: Matrix) -> "Subspace":
        return Subspace.span(m.nrows, m @ self.basis)

    def __repr__(self) -> str:
        vecs = ", ".join("(" + ",".join(str(x) for x in c) + ")" for c in self.basis.columns())
        return f"Subspace({self.ambient_dim}, {{{vecs}}})"


def _check_ambient(u: Subspace, v: Subspace) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise ShapeMismatch("subspaces live in different ambient spaces")


def subspace_meet(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.ambient_dim)
    k = kernel_basis(hstack(u.basis, -v.basis))
    return Subspace.span(u.ambient_dim, u.basis @ k.select_rows(range(u.dim)))


def subspace_join(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    return Subspace.span(u.ambient_dim, hstack(u.basis, v.basis))


def subspace_contains(u: Subspace, v: Subspace) -> bool:
    """True when ``v`` lies inside ``u``."""
    _check_ambient(u, v)
    if v.dim == 0:
        return True
    if v.dim > u.dim:
        return False
    return rank(hstack(u.basis, v.basis)) == u.dim


def quotient_projection(u: Subspace) -> tuple[Matrix, list[int]]:
    """Projection Q^n -> Q^n / u in the coordinates of the non-pivot rows.

    Returns the (n - dim u) x n matrix and the kept coordinates.  The matrix is
    the identity on those coordinates and kills ``u``.
    """
    n = u.ambient_dim
    b = u.basis
    pivots = []
    for j in range(b.ncols):
        col = b.column(j)
        pivots.append(next(i for i, x in enumerate(col) if x))
    pset = set(pivots)
    keep = [i for i in range(n) if i not in pset]
    rows = []
    for i in keep:
        row = [_ZERO] * n
        row[i] = _ONE
        for j, p in enumerate(pivots):
            row[p] = -b[i, j]
        rows.append(tuple(row))
    return Matrix._raw(tuple(rows), n), keep
