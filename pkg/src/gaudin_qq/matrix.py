"""Square matrices with rational-function entries.

Determinants and leading minors use fraction-free (Bareiss) elimination, with a
row-pivoting fallback when a leading pivot vanishes.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError
from .polyring import Field, RatFunc, join_fields, sample_points


@dataclass(frozen=True)
class RatMatrix:
    """An n×n matrix over Q(z) or C(z), stored row by row."""

    rows: tuple[tuple[RatFunc, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if any(len(row) != n for row in self.rows):
            raise ValueError("matrices must be square")

    @classmethod
    def build(cls, n: int, entry: Callable[[int, int], object], field: Field = "exact") -> RatMatrix:
        """An n × n matrix with entries ``entry(r, c)``."""
        return cls(
            tuple(tuple(RatFunc.coerce(entry(r, c), field) for c in range(n)) for r in range(n))
        )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], field: Field = "exact") -> RatMatrix:
        """A matrix from nested rows of polynomials, rational functions or scalars."""
        return cls.build(len(rows), lambda r, c: rows[r][c], field)

    @classmethod
    def identity(cls, n: int, field: Field = "exact") -> RatMatrix:
        """The identity matrix."""
        return cls.build(n, lambda r, c: 1 if r == c else 0, field)

    @classmethod
    def zero(cls, n: int, field: Field = "exact") -> RatMatrix:
        """The zero matrix."""
        return cls.build(n, lambda r, c: 0, field)

    @classmethod
    def unit(cls, n: int, row: int, column: int, value: object = 1, field: Field = "exact") -> RatMatrix:
        """``value · E_{row,column}``."""
        return cls.build(n, lambda r, c: value if (r, c) == (row, column) else 0, field)

    @classmethod
    def diagonal(cls, values: Sequence[object], field: Field = "exact") -> RatMatrix:
        """A diagonal matrix."""
        return cls.build(len(values), lambda r, c: values[r] if r == c else 0, field)

    @property
    def size(self) -> int:
        """Number of rows."""
        return len(self.rows)

    @property
    def field(self) -> Field:
        """Float if any entry is."""
        return join_fields(*(x.field for row in self.rows for x in row))

    @property
    def degree(self) -> int:
        """Largest entry degree."""
        return max((x.degree for _, _, x in self.entries()), default=0)

    def __getitem__(self, position: tuple[int, int]) -> RatFunc:
        r, c = position
        return self.rows[r][c]

    def column(self, c: int) -> tuple[RatFunc, ...]:
        """Entries of column c."""
        return tuple(row[c] for row in self.rows)

    def entries(self) -> Iterable[tuple[int, int, RatFunc]]:
        """Every entry with its row and column."""
        for r, row in enumerate(self.rows):
            for c, x in enumerate(row):
                yield r, c, x

    def map(self, fn: Callable[[RatFunc], RatFunc]) -> RatMatrix:
        """Apply ``fn`` entrywise."""
        return RatMatrix(tuple(tuple(fn(x) for x in row) for row in self.rows))

    def __add__(self, other: RatMatrix) -> RatMatrix:
        return RatMatrix(
            tuple(
                tuple(x + y for x, y in zip(a, b, strict=True))
                for a, b in zip(self.rows, other.rows, strict=True)
            )
        )

    def __neg__(self) -> RatMatrix:
        return self.map(lambda x: -x)

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        return self + (-other)

    def scale(self, factor: object) -> RatMatrix:
        """Multiply every entry by ``factor``."""
        return self.map(lambda x: x * factor)

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        n = self.size
        field = join_fields(self.field, other.field)
        out = [[RatFunc.zero(field)] * n for _ in range(n)]
        for r in range(n):
            for k in range(n):
                left = self.rows[r][k]
                if left.is_zero:
                    continue
                for c in range(n):
                    right = other.rows[k][c]
                    if not right.is_zero:
                        out[r][c] = out[r][c] + left * right
        return RatMatrix(tuple(tuple(row) for row in out))

    def transpose(self) -> RatMatrix:
        """The transposed matrix."""
        return RatMatrix(tuple(zip(*self.rows, strict=True)))

    def derivative(self) -> RatMatrix:
        """Entrywise derivative in z."""
        return self.map(lambda x: x.derivative())

    def trace(self) -> RatFunc:
        """Sum of the diagonal entries."""
        return sum((self.rows[k][k] for k in range(self.size)), RatFunc.zero(self.field))

    def submatrix(self, rows: Sequence[int], columns: Sequence[int]) -> RatMatrix:
        """The submatrix on the given rows and columns, in the given order."""
        if len(rows) != len(columns):
            raise ValueError("minors need as many rows as columns")
        return RatMatrix(tuple(tuple(self.rows[r][c] for c in columns) for r in rows))

    def determinant(self) -> RatFunc:
        """Bareiss elimination with row swaps on zero pivots."""
        n = self.size
        field = self.field
        if n == 0:
            return RatFunc.one(field)
        m = [list(row) for row in self.rows]
        sign = 1
        previous = RatFunc.one(field)
        for k in range(n):
            if m[k][k].is_zero:
                swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero), None)
                if swap is None:
                    return RatFunc.zero(field)
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            pivot = m[k][k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) / previous
            previous = pivot
        return previous * sign

    def leading_minors(self) -> list[RatFunc]:
        """Determinants of the leading 1×1, ..., n×n blocks.

        Bareiss pivots are exactly these minors while none vanishes; after a
        zero pivot the remaining blocks are expanded separately.
        """
        n = self.size
        m = [list(row) for row in self.rows]
        previous = RatFunc.one(self.field)
        minors: list[RatFunc] = []
        for k in range(n):
            pivot = m[k][k]
            minors.append(pivot)
            if pivot.is_zero:
                minors.extend(
                    self.submatrix(range(size), range(size)).determinant()
                    for size in range(k + 2, n + 1)
                )
                return minors
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) / previous
            previous = pivot
        return minors

    def leibniz_minor(self, rows: Sequence[int], columns: Sequence[int]) -> RatFunc:
        """Minor by permutation expansion; used to cross-check elimination."""
        total = RatFunc.zero(self.field)
        for perm in itertools.permutations(range(len(rows))):
            term = RatFunc.one(self.field) * permutation_sign(perm)
            for a, b in enumerate(perm):
                term = term * self.rows[rows[a]][columns[b]]
                if term.is_zero:
                    break
            total = total + term
        return total

    def inverse(self) -> RatMatrix:
        """Gauss-Jordan inverse; raises DegenerateError for singular matrices."""
        n = self.size
        field = self.field
        m = [list(row) + [RatFunc.coerce(1 if r == c else 0, field) for c in range(n)]
             for r, row in enumerate(self.rows)]
        for k in range(n):
            pivot_row = next((i for i in range(k, n) if not m[i][k].is_zero), None)
            if pivot_row is None:
                raise DegenerateError("matrix is singular")
            m[k], m[pivot_row] = m[pivot_row], m[k]
            pivot = m[k][k]
            m[k] = [x / pivot for x in m[k]]
            for i in range(n):
                if i != k and not m[i][k].is_zero:
                    factor = m[i][k]
                    m[i] = [x - factor * y for x, y in zip(m[i], m[k], strict=True)]
        return RatMatrix(tuple(tuple(row[n:]) for row in m))

    def is_zero(self) -> bool:
        """Whether every entry is zero."""
        return all(x.is_zero for row in self.rows for x in row)

    def residual(self) -> float:
        """Size of the largest entry: exact coefficients, or sampled values for floats."""
        if self.field == "exact":
            return max((float(x.num.norm()) for _, _, x in self.entries()), default=0.0)
        points = sample_points(self.degree)
        return max((x.sample_norm(points) for _, _, x in self.entries()), default=0.0)

    def first_nonzero(self, tol: float = 0.0) -> tuple[int, int, RatFunc] | None:
        """The first entry that is not zero: structurally in exact mode, above ``tol`` at sample points in float mode."""
        points = sample_points(self.degree)
        for r, c, x in self.entries():
            if x.field == "exact" and not x.is_zero:
                return r, c, x
            if x.field == "float" and x.sample_norm(points) > tol:
                return r, c, x
        return None

    def evaluate(self, point: complex) -> np.ndarray:
        """Numeric values of the entries at ``point``."""
        return np.array(
            [[complex(x(point)) for x in row] for row in self.rows], dtype=complex
        )

    def is_unipotent_upper(self) -> bool:
        """Whether the matrix is upper unitriangular."""
        one = RatFunc.one(self.field)
        return all(
            (x == one if r == c else x.is_zero) if r >= c else True
            for r, c, x in self.entries()
        )

    def is_lower_triangular(self) -> bool:
        """Whether every entry above the diagonal vanishes."""
        return all(x.is_zero for r, c, x in self.entries() if c > r)

    def text(self) -> list[list[str]]:
        """Entries as display strings."""
        return [[str(x) for x in row] for row in self.rows]


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation from its inversion count."""
    inversions = sum(
        1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b]
    )
    return -1 if inversions % 2 else 1
