"""Miura (G, q)-opers in type A and their gauge transformations.

A connection ``∂ + A(z)`` is stored through its matrix A in sl(N). Gauge action
is on the right: ``g⁻¹ (∂ + A) g = ∂ + g⁻¹ A g + g⁻¹ ∂g``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, TypeAlias

from . import config
from .backlund import backlund_step, mu_coefficient
from .cartan import CartanData, CartanTwist
from .errors import DegenerateError
from .matrix import RatMatrix
from .polyring import Field, RatFunc, log_derivative
from .qqcore import QQSolution
from .schema import MatrixCheck

logger = logging.getLogger(__name__)

# Group-valued rational functions are plain matrices; ``RatMatrix.determinant``
# confirms membership in SL(N).
GroupElement: TypeAlias = RatMatrix
Presentation: TypeAlias = Literal["lower", "upper"]


def chevalley_e(n: int, i: int, field: Field = "exact") -> RatMatrix:
    """The Chevalley generator ``e_i = E_{i,i+1}`` of sl(n)."""
    return RatMatrix.unit(n, i, i + 1, 1, field)


def chevalley_f(n: int, i: int, field: Field = "exact") -> RatMatrix:
    """The Chevalley generator ``f_i = E_{i+1,i}`` of sl(n)."""
    return RatMatrix.unit(n, i + 1, i, 1, field)


def coroot_matrix(n: int, i: int, field: Field = "exact") -> RatMatrix:
    """``α̌_i = E_ii - E_{i+1,i+1}``."""
    return RatMatrix.unit(n, i, i, 1, field) - RatMatrix.unit(n, i + 1, i + 1, 1, field)


def twist_matrix(cd: CartanData, twist: CartanTwist) -> RatMatrix:
    """The diagonal matrix of ``Z = Σ ζ_i α̌_i``."""
    n = cd.require_type_a()
    z = RatMatrix.zero(n, twist.field)
    for i, zeta in enumerate(twist.zeta):
        z += coroot_matrix(n, i, twist.field).scale(zeta)
    return z


def root_exponential(n: int, i: int, value: RatFunc, *, negative: bool = False) -> RatMatrix:
    """``exp(value · e_i)`` (or ``exp(value · f_i)``), which is ``1 + value · E``."""
    generator = chevalley_f if negative else chevalley_e
    return RatMatrix.identity(n, value.field) + generator(n, i, value.field).scale(value)


@dataclass(frozen=True)
class Connection:
    """The matrix part A of a meromorphic connection ``∂ + A``; A is traceless."""

    matrix: RatMatrix

    def __post_init__(self) -> None:
        if not self.matrix.trace().vanishes(config.LINEAR_TOL):
            raise DegenerateError(f"connection matrix has trace {self.matrix.trace()}")

    @property
    def size(self) -> int:
        """N for a connection on SL(N)."""
        return self.matrix.size


def miura_connection(sol: QQSolution, presentation: Presentation = "lower") -> Connection:
    """``∂ - Z + Σ ∂log(q₊ⁱ) α̌_i + Σ Λ_i f_i`` (``"upper"`` uses e_i and is the transpose)."""
    cd = sol.cartan
    n = cd.require_type_a()
    field = sol.field
    heights = [log_derivative(q.as_field(field)) - sol.twist.as_field(field).zeta[i] for i, q in enumerate(sol.q_plus)]
    padded = [RatFunc.zero(field), *heights, RatFunc.zero(field)]

    def entry(r: int, c: int) -> object:
        if r == c:
            return padded[r + 1] - padded[r]
        if r == c + 1:
            return sol.master.lambdas[c].as_field(field)
        return 0

    matrix = RatMatrix.build(n, entry, field)
    return Connection(matrix.transpose() if presentation == "upper" else matrix)


def constant_connection(matrix: RatMatrix) -> Connection:
    """The connection ``∂ + matrix`` for a constant traceless matrix."""
    return Connection(matrix)


def gauge(conn: Connection, g: GroupElement) -> Connection:
    """``g⁻¹ A g + g⁻¹ ∂g``."""
    inverse = g.inverse()
    return Connection(inverse @ conn.matrix @ g + inverse @ g.derivative())


def cartan_part(conn: Connection) -> list[RatFunc]:
    """Coefficients g_i in ``A|_h = -Σ g_i α̌_i``."""
    partial = RatFunc.zero(conn.matrix.field)
    coefficients = []
    for k in range(conn.size - 1):
        partial = partial + conn.matrix[k, k]
        coefficients.append(-partial)
    return coefficients


def compare_matrices(name: str, lhs: RatMatrix, rhs: RatMatrix) -> MatrixCheck:
    """Compare two matrices entrywise and name the first entry that differs."""
    difference = lhs - rhs
    found = difference.first_nonzero(config.LINEAR_TOL)
    check: MatrixCheck = {"name": name, "passed": found is None, "residual": difference.residual()}
    if found is not None:
        r, c, value = found
        check["witness"] = f"entry ({r + 1},{c + 1}) differs by {value}"
        logger.debug(f"{name}: {check['witness']}")
    return check


def backlund_gauge_element(sol: QQSolution, i: int) -> GroupElement:
    """``exp(-μ_i e_i)``: under the right action this turns the Miura oper of
    ``sol`` into the one of its i-th Bäcklund image."""
    n = sol.cartan.require_type_a()
    return root_exponential(n, i, -mu_coefficient(sol, i))


def backlund_matrix_check(sol: QQSolution, i: int) -> MatrixCheck:
    """Gauge the Miura oper by the Bäcklund element and compare with the stepped solution."""
    gauged = gauge(miura_connection(sol), backlund_gauge_element(sol, i))
    stepped = miura_connection(backlund_step(sol, i))
    return compare_matrices(f"backlund node {i + 1}", gauged.matrix, stepped.matrix)


def z_twist_check(sol: QQSolution) -> MatrixCheck:
    """Check ``∇_A = ℬ₋⁻¹ (∂ - Z) ℬ₋`` for the lower-triangular ℬ₋ of ``sol``."""
    from .wronskian import build_b_minus

    b_minus = build_b_minus(sol)
    trivial = constant_connection(-twist_matrix(sol.cartan, sol.twist.as_field(sol.field)))
    return compare_matrices(
        "z-twisted", gauge(trivial, b_minus).matrix, miura_connection(sol).matrix
    )
