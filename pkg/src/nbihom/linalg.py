"""Exact rational linear algebra: matrices, subspaces, kernels and solves.

Everything here works over ``fractions.Fraction``.  Vectors are plain tuples
of Fractions.  Elimination is done on sparse rows (``dict`` column -> value)
because the constraint systems built by the cohomology and cocycle code are
large but very sparse.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]


class LinalgError(Exception):
    pass


class Singular(LinalgError):
    pass


class NotContained(LinalgError):
    pass


class DimMismatch(LinalgError):
    pass


def q(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use a Fraction or 'p/q' string")
    return Fraction(x)


def vec(values: Iterable) -> Vector:
    return tuple(q(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return tuple(v)


def is_zero_vector(v: Sequence) -> bool:
    return not any(v)


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def vlincomb(terms: Iterable[tuple], n: int) -> Vector:
    """Sum of ``c * v`` over ``(c, v)`` pairs, as a length-``n`` vector."""
    acc = [Fraction(0)] * n
    for c, v in terms:
        if not c:
            continue
        for i, a in enumerate(v):
            if a:
                acc[i] += c * a
    return tuple(acc)


def support(v: Sequence) -> list[tuple[int, Fraction]]:
    return [(i, a) for i, a in enumerate(v) if a]


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimMismatch(f"entries do not form a {self.rows}x{self.cols} grid")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [vec(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        columns = [vec(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls(rows, len(columns), tuple(tuple(c[i] for c in columns) for i in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, tuple(zero_vector(cols) for _ in range(rows)))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(n, n, tuple(
            tuple(q(values[i]) if i == j else Fraction(0) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(self.columns()))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __call__(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise DimMismatch(f"vector of length {len(v)} for a {self.rows}x{self.cols} matrix")
        nz = support(v)
        return tuple(sum((r[j] * c for j, c in nz), Fraction(0)) for r in self.entries)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ocols = other.columns()
        return Matrix(self.rows, other.cols, tuple(
            tuple(sum((a * c[k] for k, a in enumerate(r) if a), Fraction(0)) for c in ocols)
            for r in self.entries))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(vadd(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(vsub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = q(c)
        return Matrix(self.rows, self.cols, tuple(vscale(c, r) for r in self.entries))

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square or k < 0:
            raise DimMismatch("only non-negative powers of square matrices")
        out = Matrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def is_identity(self) -> bool:
        return self.is_square and self == Matrix.identity(self.rows)

    def rank(self) -> int:
        return Echelon.of(self.entries, self.cols).rank

    def _same_shape(self, other: "Matrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimMismatch(f"shape {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(a) for a in r) for r in self.entries)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    rows = [r + zero_vector(b.cols) for r in a.entries]
    rows += [zero_vector(a.cols) + r for r in b.entries]
    return Matrix(a.rows + b.rows, a.cols + b.cols, tuple(rows))


class Echelon:
    """Incrementally maintained reduced row echelon form of sparse rows.

    Rows are dicts ``column -> Fraction``.  Every stored row has a leading 1
    at its pivot and zeros at every other pivot column.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}

    @classmethod
    def of(cls, rows: Iterable, ncols: int) -> "Echelon":
        e = cls(ncols)
        for r in rows:
            e.add(r)
        return e

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row) -> dict:
        if not isinstance(row, dict):
            row = {j: q(a) for j, a in enumerate(row) if a}
        else:
            row = {j: a for j, a in row.items() if a}
        pivots = self.pivots
        for p in [j for j in row if j in pivots]:
            c = row.get(p)
            if not c:
                continue
            for j, a in pivots[p].items():
                v = row.get(j, 0) - c * a
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
        return row

    def add(self, row) -> bool:
        """Insert a row; return True when it was independent of the others."""
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {j: a * inv for j, a in r.items()}
        for other in self.pivots.values():
            c = other.get(p)
            if c:
                for j, a in r.items():
                    v = other.get(j, 0) - c * a
                    if v:
                        other[j] = v
                    else:
                        other.pop(j, None)
        self.pivots[p] = r
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)

    def rows(self) -> list[Vector]:
        out = []
        for p in sorted(self.pivots):
            r = self.pivots[p]
            out.append(tuple(r.get(j, Fraction(0)) for j in range(self.ncols)))
        return out

    def kernel_basis(self) -> list[Vector]:
        """Basis of the null space of the stored rows (one vector per free column)."""
        free = [j for j in range(self.ncols) if j not in self.pivots]
        basis = []
        for f in free:
            x = [Fraction(0)] * self.ncols
            x[f] = Fraction(1)
            for p, r in self.pivots.items():
                a = r.get(f)
                if a:
                    x[p] = -a
            basis.append(tuple(x))
        return basis


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim stored by its canonical RREF basis."""

    ambient_dim: int
    basis: tuple

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: int) -> "Subspace":
        e = Echelon(ambient_dim)
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimMismatch(f"vector of length {len(v)} in Q^{ambient_dim}")
            e.add(v)
        return cls(ambient_dim, tuple(e.rows()))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _echelon(self) -> Echelon:
        return Echelon.of(self.basis, self.ambient_dim)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimMismatch(f"vector of length {len(v)} in Q^{self.ambient_dim}")
        return self._echelon().contains(v)

    def __le__(self, other: "Subspace") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise DimMismatch("subspaces live in different ambient spaces")
        e = other._echelon()
        return all(e.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimMismatch("subspaces live in different ambient spaces")
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        # x = sum a_i u_i = sum b_j w_j  <=>  (a, -b) in ker [U | W]
        cols = list(self.basis) + [vscale(-1, w) for w in other.basis]
        if not cols:
            return Subspace.zero(self.ambient_dim)
        ker = kernel(Matrix.from_columns(cols, self.ambient_dim))
        k = self.dim
        return Subspace.span(
            (vlincomb(zip(c[:k], self.basis), self.ambient_dim) for c in ker.basis),
            self.ambient_dim)

    def image(self, m: Matrix) -> "Subspace":
        return Subspace.span((m(v) for v in self.basis), m.rows)

    def is_stable(self, m: Matrix) -> bool:
        return self.image(m) <= self

    def complement_basis(self) -> list[Vector]:
        """Standard unit vectors completing this basis to the whole space."""
        e = self._echelon()
        return [unit_vector(self.ambient_dim, j) for j in range(self.ambient_dim) if j not in e.pivots]

    def extend_to(self, other: "Subspace") -> list[Vector]:
        """Vectors of ``other``'s basis completing ``self`` to a basis of ``other``."""
        e = self._echelon()
        return [w for w in other.basis if e.add(w)]

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of ``v`` on ``self.basis`` (NotContained if v is outside)."""
        if not self.basis:
            if any(v):
                raise NotContained("nonzero vector in the zero subspace")
            return ()
        x = solve(Matrix.from_columns(self.basis, self.ambient_dim), v)
        if x is None:
            raise NotContained("vector is not in the subspace")
        return x


def kernel(a: Matrix) -> Subspace:
    return kernel_of_rows(a.entries, a.cols)


def kernel_of_rows(rows: Iterable, ncols: int) -> Subspace:
    """Null space of the (possibly sparse, possibly generated) rows."""
    e = Echelon.of(rows, ncols)
    return Subspace.span(e.kernel_basis(), ncols)


def image(a: Matrix) -> Subspace:
    return Subspace.span(a.columns(), a.rows)


def solve(a: Matrix, b: Sequence):
    """Canonical solution of ``a x = b`` with free variables set to zero, or None."""
    if a.rows != len(b):
        raise DimMismatch(f"{a.rows} equations but right-hand side of length {len(b)}")
    return solve_rows(((r, bi) for r, bi in zip(a.entries, b)), a.cols)


def solve_rows(equations: Iterable, ncols: int):
    """Like :func:`solve` but over ``(row, rhs)`` pairs; rows may be sparse dicts."""
    e = Echelon(ncols + 1)
    for row, rhs in equations:
        if isinstance(row, dict):
            aug = dict(row)
        else:
            aug = {j: q(x) for j, x in enumerate(row) if x}
        if rhs:
            aug[ncols] = q(rhs)
        e.add(aug)
    if ncols in e.pivots:
        return None
    x = [Fraction(0)] * ncols
    for p, r in e.pivots.items():
        x[p] = r.get(ncols, Fraction(0))
    return tuple(x)


def quotient_dim(w: Subspace, u: Subspace) -> int:
    if not u <= w:
        raise NotContained("U is not contained in W")
    return w.dim - u.dim


def invert(a: Matrix) -> Matrix:
    if not a.is_square:
        raise DimMismatch("only square matrices can be inverted")
    n = a.rows
    e = Echelon(2 * n)
    for i, r in enumerate(a.entries):
        row = {j: x for j, x in enumerate(r) if x}
        row[n + i] = Fraction(1)
        e.add(row)
    if any(p not in e.pivots for p in range(n)) or e.rank != n:
        raise Singular("matrix is singular")
    # rows of e are [I | A^-1]
    return Matrix(n, n, tuple(tuple(e.pivots[i].get(n + j, Fraction(0)) for j in range(n))
                              for i in range(n)))


def is_invertible(a: Matrix) -> bool:
    return a.is_square and a.rank() == a.rows


def commutes(a: Matrix, b: Matrix) -> bool:
    return a @ b == b @ a


def commutant_basis(mats: Sequence[Matrix], n: int) -> list[Matrix]:
    """Basis of {X : X M = M X for every M in mats} for n x n matrices."""
    # unknown X[i][k] has index i*n + k
    rows = []
    for m in mats:
        for i, j in product(range(n), repeat=2):
            # (XM - MX)[i][j] = sum_k X[i][k] M[k][j] - M[i][k] X[k][j]
            r: dict = {}
            for k in range(n):
                if m[k, j]:
                    r[i * n + k] = r.get(i * n + k, 0) + m[k, j]
                if m[i, k]:
                    r[k * n + j] = r.get(k * n + j, 0) - m[i, k]
            if any(r.values()):
                rows.append(r)
    ker = kernel_of_rows(rows, n * n)
    return [Matrix(n, n, tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n))) for v in ker.basis]
