"""Dense exact linear algebra over a :class:`~wiretapnet.gf.Field`.

A :class:`Matrix` wraps a read-only int64 array of element codes. All
operations return new matrices; elimination happens in :mod:`kernels`.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .gf import Field, FieldElement, FieldError


class SingularMatrixError(ArithmeticError):
    """Raised when a square system has no unique solution."""


class DimensionError(ValueError):
    pass


class Matrix:
    __slots__ = ("field", "data")

    def __init__(self, field: Field, data):
        arr = np.array(data, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise DimensionError("matrix data must be two-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise FieldError("entry codes out of range for the field")
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Sequence], cols: int | None = None) -> "Matrix":
        """Build from nested rows of ints, coefficient tuples or elements."""
        coded = [[field.code(x) for x in row] for row in rows]
        if not coded:
            return cls.zeros(field, 0, cols or 0)
        width = len(coded[0])
        if any(len(r) != width for r in coded):
            raise DimensionError("ragged rows")
        return cls(field, coded)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __getitem__(self, idx):
        i, j = idx
        return FieldElement(int(self.data[i, j]), self.field)

    def row(self, i: int) -> list[FieldElement]:
        return [FieldElement(int(c), self.field) for c in self.data[i]]

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.data[list(idx), :].reshape(len(idx), self.cols))

    def select_cols(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.data[:, list(idx)].reshape(self.rows, len(idx)))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.data.T)

    def tolist(self) -> list[list]:
        """Rows of canonical tokens (ints, or coefficient tuples for extensions)."""
        return [[self.field.to_token(c) for c in row] for row in self.data.tolist()]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.shape == other.shape and bool(np.array_equal(self.data, other.data)))

    def __hash__(self):
        return hash((self.field, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"Matrix({self.field.token}, {self.tolist()})"


def _same_field(a: Matrix, b: Matrix):
    if a.field != b.field:
        raise FieldError("matrices over distinct fields")


def matmul(a: Matrix, b: Matrix) -> Matrix:
    _same_field(a, b)
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return Matrix(a.field, kernels.matmul(a.data, b.data, *a.field.ctx))


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(kernels.rank(m.data, *m.field.ctx))


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return m, []
    r, _, piv = kernels.rref(m.data, *m.field.ctx)
    return Matrix(m.field, r), [int(c) for c in piv]


def stack(top: Matrix, bottom: Matrix) -> Matrix:
    _same_field(top, bottom)
    if top.cols != bottom.cols:
        raise DimensionError(f"column mismatch: {top.cols} vs {bottom.cols}")
    return Matrix(top.field, np.vstack([top.data, bottom.data]))


def hstack(left: Matrix, right: Matrix) -> Matrix:
    _same_field(left, right)
    if left.rows != right.rows:
        raise DimensionError(f"row mismatch: {left.rows} vs {right.rows}")
    return Matrix(left.field, np.hstack([left.data, right.data]))


def invert(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionError("only square matrices are invertible")
    n = m.rows
    if n == 0:
        return m
    aug = np.hstack([m.data, np.eye(n, dtype=np.int64)])
    r, rk, piv = kernels.rref(aug, *m.field.ctx)
    if rk < n or int(piv[n - 1]) != n - 1:
        raise SingularMatrixError("matrix is singular")
    return Matrix(m.field, r[:, n:])


def solve(a: Matrix, b) -> Matrix:
    """Unique x with a @ x = b. ``b`` may be a column Matrix or a sequence."""
    if not isinstance(b, Matrix):
        b = Matrix.from_rows(a.field, [[x] for x in b], cols=1)
    _same_field(a, b)
    if a.rows != a.cols or b.rows != a.rows:
        raise DimensionError("solve needs a square system with matching right-hand side")
    return invert(a) @ b


def null_space(m: Matrix) -> Matrix:
    """Matrix whose columns form a basis of {x : m @ x = 0}."""
    n = m.cols
    r, piv = rref(m)
    free = [j for j in range(n) if j not in piv]
    out = np.zeros((n, len(free)), dtype=np.int64)
    f = m.field
    for col, j in enumerate(free):
        out[j, col] = 1
        for i, pc in enumerate(piv):
            out[pc, col] = f.neg_code(int(r.data[i, j]))
    return Matrix(f, out)


def right_inverse(m: Matrix) -> Matrix:
    """A with m @ A = I for a full-row-rank m (zero rows outside the pivots)."""
    k = m.rows
    if k == 0:
        return Matrix.zeros(m.field, m.cols, 0)
    aug = hstack(m, Matrix.identity(m.field, k))
    r, piv = rref(aug)
    if len(piv) < k or piv[-1] >= m.cols:
        raise SingularMatrixError("matrix does not have full row rank")
    out = np.zeros((m.cols, k), dtype=np.int64)
    for i, pc in enumerate(piv):
        out[pc, :] = r.data[i, m.cols:]
    return Matrix(m.field, out)


def row_space_intersection_trivial(a: Matrix, b: Matrix) -> bool:
    """True iff rowspace(a) and rowspace(b) meet only in zero."""
    if a.cols != b.cols:
        raise DimensionError(f"column mismatch: {a.cols} vs {b.cols}")
    return rank(stack(a, b)) == rank(a) + rank(b)


def vandermonde(field: Field, rows: int, points: Sequence, allow_zero: bool = False) -> Matrix:
    """Entry (i, j) = points[j] ** i.

    Points must be distinct; zero is rejected unless ``allow_zero`` (the
    column of zero is then ``[1, 0, ..., 0]``).
    """
    codes = [field.code(x) for x in points]
    if len(set(codes)) != len(codes):
        raise ValueError("vandermonde points must be distinct")
    if not allow_zero and 0 in codes:
        raise ValueError("vandermonde points must be nonzero")
    limit = field.order if allow_zero else field.order - 1
    if len(codes) > limit:
        raise ValueError(f"{len(codes)} points exceed the {limit} available in {field.token}")
    out = np.zeros((rows, len(codes)), dtype=np.int64)
    for j, c in enumerate(codes):
        acc = 1
        for i in range(rows):
            out[i, j] = acc
            acc = field.mul_codes(acc, c)
    return Matrix(field, out)


def column_subsets_full_rank(m: Matrix, size: int | None = None) -> bool:
    """Every ``size``-column submatrix has rank ``size`` (default: rows)."""
    size = m.rows if size is None else size
    return all(rank(m.select_cols(c)) == size for c in itertools.combinations(range(m.cols), size))
