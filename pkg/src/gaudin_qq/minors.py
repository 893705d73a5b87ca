"""Generalized minors, Gauss decomposition and the Fomin-Zelevinsky identity in SL(N).

Weyl elements act through Tits lifts: the lift of s_i acts on the span of
``e_i, e_{i+1}`` by ``[[0, -1], [1, 0]]``. A lift is a signed permutation,
so multiplying by it only reorders and negates rows or columns.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations

from typing_extensions import TypedDict

from .cartan import (
    CartanData,
    WeylElement,
    cartan_from_label,
    identity_element,
    simple_reflection,
    weyl_enumerate,
)
from .errors import DegenerateError, NotTypeAError
from .matrix import RatMatrix, permutation_sign
from .polyring import RatFunc
from .schema import MinorTableEntry

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeylLift:
    """A signed permutation matrix: ``lift · e_c = signs[c] · e_{perm[c]}``."""

    element: WeylElement
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def matrix(self) -> RatMatrix:
        """The signed permutation matrix."""
        n = len(self.perm)
        return RatMatrix.build(n, lambda r, c: self.signs[c] if r == self.perm[c] else 0)

    def inverse_times(self, g: RatMatrix) -> RatMatrix:
        """``lift⁻¹ · g``: row r is ``signs[r] ·`` row ``perm[r]`` of g."""
        return RatMatrix(
            tuple(tuple(x * self.signs[r] for x in g.rows[self.perm[r]]) for r in range(g.size))
        )

    def right_times(self, g: RatMatrix) -> RatMatrix:
        """``g · lift``: column c is ``signs[c] ·`` column ``perm[c]`` of g."""
        return RatMatrix(
            tuple(
                tuple(row[self.perm[c]] * self.signs[c] for c in range(g.size)) for row in g.rows
            )
        )


def weyl_lift(w: WeylElement) -> WeylLift:
    """Tits lift of w, multiplied out along its reduced word."""
    n = w.cartan.require_type_a()
    perm = list(range(n))
    signs = [1] * n
    for i in w.reduced_word:
        # right-multiply by the lift of s_i: e_i -> e_{i+1}, e_{i+1} -> -e_i
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        signs[i], signs[i + 1] = signs[i + 1], -signs[i]
    return WeylLift(w, tuple(perm), tuple(signs))


def type_a(n: int) -> CartanData:
    """The Cartan data of SL(n)."""
    if n < 2:
        raise NotTypeAError(f"SL({n}) has no simple roots")
    return cartan_from_label(f"A{n - 1}")


def principal_minor(g: RatMatrix, size: int) -> RatFunc:
    """Determinant of the leading ``size × size`` block."""
    if not 1 <= size <= g.size:
        raise IndexError(f"minor size {size} out of range for a {g.size}×{g.size} matrix")
    return g.leading_minors()[size - 1]


def generalized_minor(g: RatMatrix, u: WeylElement, v: WeylElement, node: int) -> RatFunc:
    """``Δ_{u ω_i, v ω_i}(g)``: leading (node+1)-minor of ``ū⁻¹ g v̄``."""
    _check_group(g, u, v)
    return principal_minor(weyl_lift(v).right_times(weyl_lift(u).inverse_times(g)), node + 1)


def _check_group(g: RatMatrix, *elements: WeylElement) -> None:
    for w in elements:
        if w.cartan.require_type_a() != g.size:
            raise NotTypeAError(f"{w.cartan.label} does not act on {g.size}×{g.size} matrices")


def minor_rows(u: WeylElement, node: int) -> tuple[tuple[int, ...], int]:
    """Sorted row set of ``Δ_{uω_i, ·}`` and the sign relating it to the lifted minor."""
    lift = weyl_lift(u)
    picked = lift.perm[: node + 1]
    sign = permutation_sign(sorted(range(node + 1), key=lambda k: picked[k]))
    for s in lift.signs[: node + 1]:
        sign *= s
    return tuple(sorted(picked)), sign


def row_set_minor(g: RatMatrix, rows: Sequence[int], columns: Sequence[int]) -> RatFunc:
    """Minor on sorted row and column sets."""
    return g.submatrix(sorted(rows), sorted(columns)).determinant()


def minor_sign(u: WeylElement, v: WeylElement, node: int) -> int:
    """Sign ε with ``Δ_{uω_i, vω_i}(g) = ε · row_set_minor(g, rows(u), rows(v))``."""
    return minor_rows(u, node)[1] * minor_rows(v, node)[1]


class GaussFactors(TypedDict):
    """``g = n₋ · h · n₊`` with unipotent n₋ (lower) and n₊ (upper)."""

    n_minus: RatMatrix
    h: RatMatrix
    n_plus: RatMatrix


def gauss_decompose(g: RatMatrix) -> GaussFactors:
    """LDU factorization without pivoting; refuses when a leading minor vanishes."""
    n = g.size
    field = g.field
    upper = [list(row) for row in g.rows]
    lower = [[RatFunc.coerce(1 if r == c else 0, field) for c in range(n)] for r in range(n)]
    for k in range(n):
        pivot = upper[k][k]
        if pivot.is_zero:
            raise DegenerateError(f"principal minor {k + 1} vanishes; g is not in the big cell")
        for i in range(k + 1, n):
            factor = upper[i][k] / pivot
            lower[i][k] = factor
            if not factor.is_zero:
                upper[i] = [x - factor * y for x, y in zip(upper[i], upper[k], strict=True)]
    diagonal = [upper[k][k] for k in range(n)]
    n_plus = [[x / diagonal[r] for x in row] for r, row in enumerate(upper)]
    return {
        "n_minus": RatMatrix(tuple(tuple(row) for row in lower)),
        "h": RatMatrix.diagonal(diagonal, field),
        "n_plus": RatMatrix(tuple(tuple(row) for row in n_plus)),
    }


def fz_identity_check(g: RatMatrix, u: WeylElement, v: WeylElement, node: int) -> RatFunc:
    """Left side minus right side of

    ``Δ_{uω_i,vω_i} Δ_{us_iω_i,vs_iω_i} - Δ_{us_iω_i,vω_i} Δ_{uω_i,vs_iω_i}
    = Π_{j≠i} Δ_{uω_j,vω_j}^{-a_ji}``

    which vanishes when ``ℓ(u s_i) > ℓ(u)`` and ``ℓ(v s_i) > ℓ(v)``.
    """
    _check_group(g, u, v)
    cd = u.cartan
    s = simple_reflection(cd, node)
    us, vs = u * s, v * s
    if us.length <= u.length or vs.length <= v.length:
        raise DegenerateError(f"s_{node + 1} does not lengthen both u and v")
    lhs = (
        generalized_minor(g, u, v, node) * generalized_minor(g, us, vs, node)
        - generalized_minor(g, us, v, node) * generalized_minor(g, u, vs, node)
    )
    rhs = RatFunc.one(g.field)
    for j in cd.neighbors(node):
        rhs = rhs * generalized_minor(g, u, v, j) ** (-cd.entry(j, node))
    return lhs - rhs


def wedge_coefficients(g: RatMatrix, columns: Sequence[int]) -> dict[tuple[int, ...], RatFunc]:
    """Coefficients of ``g e_{c1} ∧ ··· ∧ g e_{ck}`` on the basis ``e_R``, R sorted."""
    coefficients = {}
    for rows in combinations(range(g.size), len(columns)):
        value = g.leibniz_minor(rows, columns)
        if not value.is_zero:
            coefficients[rows] = value
    return coefficients


@dataclass(frozen=True)
class OrbitComponent:
    """One extremal vector ``w̄ ν_i`` of a fundamental representation."""

    element: WeylElement
    rows: tuple[int, ...]
    coefficient: RatFunc
    minor: RatFunc

    @property
    def matches(self) -> bool:
        """Whether the coefficient equals the expected minor."""
        return (self.coefficient - self.minor).vanishes()


def orbit_expansion_check(g: RatMatrix, node: int) -> list[OrbitComponent]:
    """Expand ``g ν_i`` on the extremal vectors ``w̄ ν_i`` and compare with ``Δ_{wω_i,ω_i}(g)``.

    Each coset of the stabilizer of ω_i is visited once, through its shortest
    representative.
    """
    n = g.size
    cd = type_a(n)
    identity = identity_element(cd)
    expansion = wedge_coefficients(g, range(node + 1))
    seen: set[tuple[int, ...]] = set()
    components = []
    for w in weyl_enumerate(cd):
        lift = weyl_lift(w)
        image = wedge_coefficients(lift.matrix(), range(node + 1))
        [(rows, basis_sign)] = image.items()
        if rows in seen:
            continue
        seen.add(rows)
        coefficient = expansion.get(rows, RatFunc.zero(g.field)) / basis_sign
        components.append(
            OrbitComponent(w, rows, coefficient, generalized_minor(g, w, identity, node))
        )
    return components


def minor_table(g: RatMatrix, elements: Sequence[WeylElement]) -> list[MinorTableEntry]:
    """``Δ_{uω_i, vω_i}(g)`` for the listed u, v and every node, one row per pair of cosets.

    Each value is cross-checked against the signed minor on rows u({1..i})
    and columns v({1..i}).
    """
    table: list[MinorTableEntry] = []
    seen: set[tuple[tuple[int, ...], tuple[int, ...], int]] = set()
    for node in range(g.size - 1):
        for u in elements:
            rows, _ = minor_rows(u, node)
            for v in elements:
                columns, _ = minor_rows(v, node)
                if (rows, columns, node) in seen:
                    continue
                seen.add((rows, columns, node))
                value = generalized_minor(g, u, v, node)
                expected = row_set_minor(g, rows, columns) * minor_sign(u, v, node)
                table.append({
                    "u": u.word_string,
                    "v": v.word_string,
                    "node": node + 1,
                    "minor": str(value),
                    "row_set_agrees": (value - expected).vanishes(),
                })
    return table
