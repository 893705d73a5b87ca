"""The G-Wronskian of a qq-system solution in type A.

``ℬ₋`` is the lower-triangular solution of ``∂ℬ₋ = Z ℬ₋ + ℬ₋ A`` with A the
Miura connection; ``𝒩₊`` kills the Cartan part of A; ``𝒢 = ℬ₋ 𝒩₊``. Its
generalized minors reproduce the q₊ of the whole Weyl orbit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import config
from .backlund import FullQQSystem
from .cartan import identity_element, simple_reflection
from .errors import DegenerateError, TailSolveError
from .matrix import RatMatrix
from .minors import generalized_minor
from .oper import Connection, compare_matrices, gauge, miura_connection, root_exponential, twist_matrix
from .polyring import (
    Field,
    Poly,
    PolyEquation,
    PolyUnknown,
    RatFunc,
    Scalar,
    format_scalar,
    log_derivative,
    poly_linear_solve,
    sample_points,
)
from .qqcore import QQSolution
from .schema import MatrixCheck, MinorMatch, RelationCheck

logger = logging.getLogger(__name__)


def _heights(sol: QQSolution) -> tuple[list[Poly], Field]:
    field = sol.field
    one = Poly.one(field)
    return [one, *(q.as_field(field) for q in sol.q_plus), one], field


def build_n_plus(sol: QQSolution, *, ascending: bool = True) -> RatMatrix:
    """``Π exp(x_i e_i)`` with ``x_i = (∂log q₊ⁱ - ζ_i) / Λ_i``.

    ``ascending`` applies the factors in increasing node order, i.e. the
    product is written ``exp(x_r e_r) ··· exp(x_1 e_1)`` and 𝒩₊ differs from
    the identity only on the first superdiagonal.
    """
    n = sol.cartan.require_type_a()
    field = sol.field
    result = RatMatrix.identity(n, field)
    for i, q in enumerate(sol.q_plus):
        lam = sol.master.lambdas[i].as_field(field)
        if lam.is_zero:
            raise DegenerateError(f"Λ_{i + 1} is the zero polynomial")
        x = (log_derivative(q.as_field(field)) - sol.twist.as_field(field).zeta[i]) / RatFunc.coerce(lam)
        factor = root_exponential(n, i, x)
        result = factor @ result if ascending else result @ factor
    return result


def _solve_first_order(delta: Scalar, rhs: RatFunc, base: Poly) -> tuple[RatFunc, RatFunc | None] | None:
    """A rational v with ``∂v - δ v = rhs`` and the kernel direction, or None.

    Writing ``v = N / D`` turns the equation into a polynomial one for N. In
    exact mode D is ``gcd(Q, ∂Q)`` for the reduced denominator Q of ``rhs``;
    in float mode powers of ``base`` are tried. The kernel direction is set
    only when δ = 0, where v is fixed up to a constant: v is then normalized
    to have no component along it.
    """
    field = rhs.field
    if rhs.is_zero:
        kernel = RatFunc.one(field) if _vanishes(delta) else None
        return RatFunc.zero(field), kernel
    p, q = rhs.num, rhs.den
    if field == "exact":
        candidates = [q.gcd(q.derivative()) if q.degree > 0 else Poly.one(field)]
    else:
        candidates = [base**m for m in range(config.TAIL_MAX_POLE_ORDER + 1)]

    for d in candidates:
        bound = max(p.degree - q.degree + 1, 0) + d.degree
        equation = PolyEquation(
            {"n": ((d.derivative() + d.scale(delta)) * q * -1, d * q)}, p * d * d
        )
        result = poly_linear_solve([PolyUnknown("n", bound)], [equation], field)
        if result.status == "inconsistent":
            continue
        numerator = result.particular["n"]
        if result.status != "family":
            return RatFunc(numerator, d), None
        direction = result.kernel[0]["n"].monic()
        numerator -= direction.scale(numerator.coefficient(direction.degree))
        return RatFunc(numerator, d), RatFunc(direction, d)
    return None


def _vanishes(value: Scalar) -> bool:
    return value == 0 if not isinstance(value, complex) else abs(value) <= config.RESONANCE_TOL


@dataclass(frozen=True)
class TailKernel:
    """A free direction of ℬ₋ at a resonant entry below the first subdiagonal.

    Adding ``c · direction`` to entry (row, column) still solves the equation
    for ℬ₋ once the entries to its left in the same row are re-solved.
    """

    row: int
    column: int
    direction: RatFunc


def build_b_minus(sol: QQSolution) -> RatMatrix:
    """The lower-triangular ℬ₋ of a qq-system solution.

    The diagonal is ``q₊ⁱ / q₊ⁱ⁻¹``, the first subdiagonal is ``q₋ⁱ / q₊ⁱ⁻¹``
    and every deeper entry solves a scalar first-order equation fed by the
    entry to its right.
    """
    return b_minus_with_kernels(sol)[0]


def b_minus_with_kernels(sol: QQSolution) -> tuple[RatMatrix, tuple[TailKernel, ...]]:
    """ℬ₋ together with the kernel directions dropped at resonant entries."""
    cd = sol.cartan
    n = cd.require_type_a()
    y, field = _heights(sol)
    z = twist_matrix(cd, sol.twist.as_field(field))
    zdiag = [z[k, k].constant_value() for k in range(n)]
    base = Poly.one(field)
    for q in sol.q_plus:
        base *= q.as_field(field)

    rows = [[RatFunc.zero(field) for _ in range(n)] for _ in range(n)]
    diagonal = [RatFunc(y[k + 1], y[k]) for k in range(n)]
    for k in range(n):
        rows[k][k] = diagonal[k]
    for k in range(n - 1):
        rows[k + 1][k] = RatFunc(sol.q_minus[k].as_field(field), y[k])

    kernels: list[TailKernel] = []
    for level in range(2, n):
        for k in range(n - level):
            j = k + level
            lam = RatFunc.coerce(sol.master.lambdas[k].as_field(field))
            rhs = lam * rows[j][k + 1] / diagonal[k]
            solved = _solve_first_order(zdiag[j] - zdiag[k], rhs, base)
            if solved is None:
                raise TailSolveError(j, k)
            v, kernel = solved
            rows[j][k] = diagonal[k] * v
            if kernel is not None:
                logger.warning(f"ℬ₋ entry ({j + 1}, {k + 1}) is fixed only up to {diagonal[k] * kernel}")
                kernels.append(TailKernel(j, k, diagonal[k] * kernel))
    logger.debug(f"Built ℬ₋ for SL({n})")
    return RatMatrix(tuple(tuple(row) for row in rows)), tuple(kernels)


@dataclass(frozen=True)
class WronskianData:
    """A qq-system solution with its ℬ₋, 𝒩₊ and 𝒢 = ℬ₋ 𝒩₊."""

    solution: QQSolution
    b_minus: RatMatrix
    n_plus: RatMatrix
    g: RatMatrix
    tail_kernels: tuple[TailKernel, ...] = ()


def build_g(sol: QQSolution, *, ascending: bool = True) -> WronskianData:
    """Assemble ℬ₋, 𝒩₊ and their product for a type-A solution."""
    b_minus, kernels = b_minus_with_kernels(sol)
    n_plus = build_n_plus(sol, ascending=ascending)
    return WronskianData(sol, b_minus, n_plus, b_minus @ n_plus, kernels)


def n_plus_after_gauge(sol: QQSolution, *, ascending: bool = True) -> Connection:
    """The Miura oper gauged by 𝒩₊; its diagonal vanishes identically."""
    return gauge(miura_connection(sol), build_n_plus(sol, ascending=ascending))


def _size(value: RatFunc) -> float:
    if value.field == "exact":
        return float(value.num.norm())
    return value.sample_norm(sample_points(value.degree))


def _relation(node: int, name: str, residual: RatFunc) -> RelationCheck:
    size = _size(residual)
    passed = residual.is_zero if residual.field == "exact" else size <= config.LINEAR_TOL
    return {"node": node + 1, "relation": name, "residual": size, "passed": passed}


def verify_wronskian_equation(wd: WronskianData) -> list[RelationCheck]:
    """Check the first-order relations linking minors of 𝒢 across s_i.

    ``(∂ - ⟨Z, ω_i⟩) Δ_{ω_i,ω_i} = Λ_i Δ_{ω_i,s_iω_i}`` and
    ``(∂ - ⟨Z, ω_i - α_i⟩) Δ_{s_iω_i,ω_i} = Λ_i Δ_{s_iω_i,s_iω_i}``, plus the
    vector form ``(∂ - Z) 𝒢 e₁ = Λ_1 𝒢 e₂``.
    """
    sol = wd.solution
    cd = sol.cartan
    g = wd.g
    field = g.field
    identity = identity_element(cd)
    checks = []
    for i in range(cd.rank):
        s = simple_reflection(cd, i)
        lam = RatFunc.coerce(sol.master.lambdas[i].as_field(field))
        zeta = sol.twist.as_field(field).zeta[i]
        pairing = sol.pairing(i)

        top = generalized_minor(g, identity, identity, i)
        checks.append(_relation(
            i, "top", top.derivative() - top * zeta - lam * generalized_minor(g, identity, s, i)
        ))
        bottom = generalized_minor(g, s, identity, i)
        checks.append(_relation(
            i,
            "bottom",
            bottom.derivative() - bottom * (zeta - pairing) - lam * generalized_minor(g, s, s, i),
        ))

    z = twist_matrix(cd, sol.twist.as_field(field))
    lam = RatFunc.coerce(sol.master.lambdas[0].as_field(field))
    worst = None
    for r in range(g.size):
        entry = g[r, 0].derivative() - z[r, r] * g[r, 0] - lam * g[r, 1]
        if worst is None or _size(entry) > _size(worst):
            worst = entry
    if worst is not None:
        checks.append(_relation(0, "vector", worst))
    return checks


def matrix_checks(wd: WronskianData) -> list[MatrixCheck]:
    """Structural checks: det 𝒢 = 1, shapes of ℬ₋ and 𝒩₊, and the Cartan part after 𝒩₊."""
    n = wd.g.size
    field = wd.g.field
    one = RatMatrix.identity(1, field)
    checks = [
        compare_matrices("det G = 1", RatMatrix(((wd.g.determinant(),),)), one),
        {"name": "B- lower triangular", "passed": wd.b_minus.is_lower_triangular(), "residual": 0.0},
        {"name": "N+ unipotent", "passed": wd.n_plus.is_unipotent_upper(), "residual": 0.0},
    ]
    gauged = n_plus_after_gauge(wd.solution).matrix
    diagonal = RatMatrix.diagonal([gauged[k, k] for k in range(n)], field)
    checks.append(compare_matrices("N+ kills Cartan part", diagonal, RatMatrix.zero(n, field)))
    return checks


def _proportionality(minor: RatFunc, q: Poly) -> Scalar | None:
    ratio = minor / RatFunc.coerce(q.as_field(minor.field))
    if ratio.field == "exact":
        return ratio.constant_value() if ratio.is_constant and not ratio.is_zero else None
    values = [complex(ratio(point)) for point in sample_points(ratio.degree)]
    if abs(values[0]) <= config.LINEAR_TOL:
        return None
    spread = max(abs(v - values[0]) for v in values)
    return values[0] if spread <= config.LINEAR_TOL * abs(values[0]) else None


def minor_qq_match(wd: WronskianData, system: FullQQSystem) -> list[MinorMatch]:
    """Compare ``Δ_{w⁻¹ω_i, ω_i}(𝒢)`` with q₊ⁱ at every orbit entry w."""
    cd = wd.solution.cartan
    identity = identity_element(cd)
    matches: list[MinorMatch] = []
    for entry in system.ordered():
        inverse = entry.element.inverse()
        for i in range(cd.rank):
            minor = generalized_minor(wd.g, inverse, identity, i)
            q = entry.solution.q_plus[i]
            constant = None if minor.is_zero else _proportionality(minor, q)
            matches.append({
                "word": entry.element.word_string,
                "node": i + 1,
                "minor": str(minor),
                "q_plus": str(q),
                "constant": _record(constant),
                "passed": constant is not None,
            })
            if constant is None:
                logger.warning(
                    f"Minor at {entry.element.word_string or 'e'}, node {i + 1} is not a multiple of q₊"
                )
    return matches


def _record(value: Scalar | None) -> str | list[float] | None:
    if value is None:
        return None
    if isinstance(value, complex):
        return [value.real, value.imag]
    return format_scalar(value)


def random_unipotent_commutator(
    n: int, rng: np.random.Generator, field: Field = "exact", degree: int = 1
) -> RatMatrix:
    """A random element of [N₊, N₊](z): unitriangular with zero first superdiagonal."""

    def entry(r: int, c: int) -> object:
        if r == c:
            return 1
        if c >= r + 2:
            return Poly(tuple(int(x) for x in rng.integers(-3, 4, size=degree + 1)), field)
        return 0

    return RatMatrix.build(n, entry, field)


def equivalent(wd: WronskianData, u: RatMatrix) -> WronskianData:
    """Right-multiply 𝒢 (and 𝒩₊) by an element of [N₊, N₊](z)."""
    return WronskianData(wd.solution, wd.b_minus, wd.n_plus @ u, wd.g @ u, wd.tail_kernels)
