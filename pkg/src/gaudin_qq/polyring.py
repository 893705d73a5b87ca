"""Univariate polynomials and rational functions in z.

Two coefficient fields are supported: ``"exact"`` keeps every coefficient as a
``fractions.Fraction`` and ``"float"`` keeps complex doubles. Mixed arithmetic
promotes to float. Exact gcd, division and factorization go through sympy;
float division and root finding go through ``numpy.polynomial``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Literal, TypeAlias

import numpy as np
import sympy
from numpy.polynomial import polynomial as npoly

from . import config
from .errors import DegenerateError

logger = logging.getLogger(__name__)

Field: TypeAlias = Literal["exact", "float"]
Scalar: TypeAlias = Fraction | complex
SolveStatus: TypeAlias = Literal["unique", "family", "inconsistent"]

_Z = sympy.Symbol("z")


def to_scalar(value: object, field: Field) -> Scalar:
    """Coerce an int, Fraction, float, complex or ``"p/q"`` string into ``field``."""
    if field == "exact":
        match value:
            case Fraction():
                return value
            case bool():
                raise TypeError("booleans are not coefficients")
            case int():
                return Fraction(value)
            case str():
                return Fraction(value.strip())
            case float():
                return Fraction(value)
            case complex():
                if value.imag != 0:
                    raise TypeError(f"{value} has a nonzero imaginary part")
                return Fraction(value.real)
        if isinstance(value, sympy.Rational):
            return Fraction(int(value.p), int(value.q))
        raise TypeError(f"cannot use {value!r} as an exact coefficient")

    match value:
        case complex():
            return value
        case str():
            return complex(float(Fraction(value.strip())))
        case Fraction():
            return complex(float(value))
        case int() | float():
            return complex(value)
    if isinstance(value, np.number):
        return complex(value)
    raise TypeError(f"cannot use {value!r} as a float coefficient")


def zero_scalar(field: Field) -> Scalar:
    """Zero in the given field."""
    return Fraction(0) if field == "exact" else 0j


def join_fields(*fields: Field) -> Field:
    """Float as soon as one of the fields is."""
    return "float" if "float" in fields else "exact"


def scalar_to_sympy(value: Fraction) -> sympy.Rational:
    """A Fraction as a sympy Rational."""
    return sympy.Rational(value.numerator, value.denominator)


def sympy_to_fraction(value: sympy.Expr) -> Fraction:
    """A rational sympy number as a Fraction."""
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def rationalize(value: Scalar, max_denominator: int) -> Fraction | None:
    """Return the nearest small-denominator rational, or None for non-real values."""
    if isinstance(value, Fraction):
        return value
    if abs(value.imag) > config.ROOT_EQUALITY_TOL * (1 + abs(value)):
        return None
    return Fraction(value.real).limit_denominator(max_denominator)


def format_scalar(value: Scalar) -> str:
    """Display text for a scalar, dropping a zero imaginary part."""
    if isinstance(value, Fraction):
        return str(value)
    if value.imag == 0:
        return f"{value.real:.12g}"
    return f"({value.real:.12g}{value.imag:+.12g}j)"


@dataclass(frozen=True, slots=True)
class Poly:
    """A polynomial with coefficients stored lowest degree first.

    Trailing zero coefficients are stripped, so the zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    coeffs: tuple[Scalar, ...]
    field: Field = "exact"

    def __post_init__(self) -> None:
        coeffs = [to_scalar(c, self.field) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def constant(cls, value: object, field: Field = "exact") -> Poly:
        """The constant polynomial ``value``."""
        return cls((to_scalar(value, field),), field)

    @classmethod
    def zero(cls, field: Field = "exact") -> Poly:
        """The zero polynomial, of degree -1."""
        return cls((), field)

    @classmethod
    def one(cls, field: Field = "exact") -> Poly:
        """The constant polynomial 1."""
        return cls.constant(1, field)

    @classmethod
    def monomial(cls, degree: int, field: Field = "exact", coefficient: object = 1) -> Poly:
        """``coefficient · z^degree``."""
        zero = zero_scalar(field)
        return cls((zero,) * degree + (to_scalar(coefficient, field),), field)

    @classmethod
    def from_roots(
        cls, roots: Iterable[object], field: Field = "exact", lead: object = 1
    ) -> Poly:
        """Build ``lead · Π (z - r)``."""
        result = cls.constant(lead, field)
        for root in roots:
            r = to_scalar(root, field)
            result *= cls((-r, 1), field)
        return result

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        """Whether there are no nonzero coefficients."""
        return not self.coeffs

    @property
    def lead(self) -> Scalar:
        """Leading coefficient, zero for the zero polynomial."""
        return self.coeffs[-1] if self.coeffs else zero_scalar(self.field)

    def coefficient(self, k: int) -> Scalar:
        """Coefficient of ``z^k``, zero beyond the degree."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return zero_scalar(self.field)

    def as_field(self, field: Field) -> Poly:
        """The same polynomial with coefficients in ``field``."""
        if field == self.field:
            return self
        if field == "float":
            return Poly(tuple(complex(float(c)) for c in self.coeffs), "float")
        return self.to_exact()

    def to_exact(self, max_denominator: int = config.MAX_RATIONAL_DENOMINATOR) -> Poly:
        """Rationalize every coefficient; raises DegenerateError on complex values."""
        if self.field == "exact":
            return self
        coeffs = []
        for c in self.coeffs:
            rational = rationalize(c, max_denominator)
            if rational is None:
                raise DegenerateError(f"coefficient {c} is not real")
            coeffs.append(rational)
        return Poly(tuple(coeffs), "exact")

    def _promote(self, other: object) -> tuple[Poly, Poly]:
        if not isinstance(other, Poly):
            other = Poly.constant(other, self.field)
        field = join_fields(self.field, other.field)
        return self.as_field(field), other.as_field(field)

    def __add__(self, other: object) -> Poly:
        if isinstance(other, RatFunc):
            return NotImplemented
        a, b = self._promote(other)
        size = max(len(a.coeffs), len(b.coeffs))
        return Poly(
            tuple(a.coefficient(k) + b.coefficient(k) for k in range(size)), a.field
        )

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(tuple(-c for c in self.coeffs), self.field)

    def __sub__(self, other: object) -> Poly:
        if isinstance(other, RatFunc):
            return NotImplemented
        a, b = self._promote(other)
        return a + (-b)

    def __rsub__(self, other: object) -> Poly:
        return (-self) + other

    def __mul__(self, other: object) -> Poly:
        if isinstance(other, RatFunc):
            return NotImplemented
        a, b = self._promote(other)
        if a.is_zero or b.is_zero:
            return Poly.zero(a.field)
        out = [zero_scalar(a.field)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(b.coeffs):
                out[i + j] += x * y
        return Poly(tuple(out), a.field)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Poly:
        if exponent < 0:
            raise ValueError("negative powers of a polynomial are rational functions")
        result = Poly.one(self.field)
        for _ in range(exponent):
            result *= self
        return result

    def __call__(self, x: object) -> object:
        """Evaluate by Horner's rule; ``x`` may be a scalar or a numpy array."""
        result: object = zero_scalar(self.field)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def derivative(self, order: int = 1) -> Poly:
        """The ``order``-th derivative."""
        result = self
        for _ in range(order):
            result = Poly(
                tuple(k * c for k, c in enumerate(result.coeffs) if k > 0), self.field
            )
        return result

    def monic(self) -> Poly:
        """Divide by the leading coefficient."""
        if self.is_zero:
            raise DegenerateError("the zero polynomial has no monic normalization")
        lead = self.lead
        return Poly(tuple(c / lead for c in self.coeffs[:-1]) + (lead / lead,), self.field)

    def scale(self, factor: object) -> Poly:
        """Multiply by a scalar."""
        return self * Poly.constant(factor, self.field)

    def norm(self) -> float:
        """Largest coefficient magnitude."""
        return max((abs(c) for c in self.coeffs), default=0.0)

    def to_sympy(self) -> sympy.Poly:
        """Convert an exact polynomial to a sympy Poly in z."""
        if self.field != "exact":
            raise TypeError("only exact polynomials convert to sympy")
        coeffs = [scalar_to_sympy(c) for c in reversed(self.coeffs)] or [0]
        return sympy.Poly(coeffs, _Z, domain=sympy.QQ)

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> Poly:
        """Convert a rational sympy Poly back."""
        return cls(
            tuple(sympy_to_fraction(c) for c in reversed(poly.all_coeffs())), "exact"
        )

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        a, b = self._promote(other)
        if b.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if a.field == "exact":
            quotient, remainder = a.to_sympy().div(b.to_sympy())
            return Poly.from_sympy(quotient), Poly.from_sympy(remainder)
        if a.is_zero:
            return a, a
        quotient, remainder = npoly.polydiv(
            np.array(a.coeffs, dtype=complex), np.array(b.coeffs, dtype=complex)
        )
        return Poly(tuple(quotient), "float"), Poly(tuple(remainder), "float")

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def exact_div(self, other: Poly) -> Poly:
        """Quotient by ``other``; exact division must leave no remainder."""
        quotient, remainder = divmod(self, other)
        if self.field == "exact" and not remainder.is_zero:
            raise ArithmeticError(f"{other} does not divide {self}")
        return quotient

    def gcd(self, other: Poly) -> Poly:
        """Monic greatest common divisor. Exact mode only."""
        a, b = self._promote(other)
        if a.field != "exact":
            raise TypeError("gcd is only defined for exact polynomials")
        if a.is_zero and b.is_zero:
            return a
        return Poly.from_sympy(a.to_sympy().gcd(b.to_sympy())).monic()

    def roots(self) -> RootList:
        """Roots with multiplicity.

        Float mode returns companion-matrix eigenvalues. Exact mode returns the
        rational roots and keeps the irreducible remainder as ``cofactor``.
        """
        if self.is_zero:
            raise DegenerateError("the zero polynomial has no root list")
        if self.degree == 0:
            return RootList((), self.lead, Poly.one(self.field))
        if self.field == "float":
            found = npoly.polyroots(np.array(self.coeffs, dtype=complex))
            ordered = sorted((complex(r) for r in found), key=lambda r: (r.real, r.imag))
            return RootList(tuple(ordered), self.lead, Poly.one("float"))

        _, factors = self.to_sympy().factor_list()
        roots: list[Fraction] = []
        cofactor = Poly.one("exact")
        for factor, multiplicity in factors:
            if factor.degree() == 1:
                a1, a0 = factor.all_coeffs()
                roots.extend([-sympy_to_fraction(a0) / sympy_to_fraction(a1)] * multiplicity)
            else:
                cofactor *= Poly.from_sympy(factor) ** multiplicity
        return RootList(tuple(sorted(roots)), self.lead, cofactor.monic())

    def is_squarefree(self) -> bool:
        """Whether there are no repeated roots."""
        if self.degree <= 0:
            return True
        if self.field == "exact":
            return self.gcd(self.derivative()).degree == 0
        return all(m == 1 for _, m in self.roots().clusters())

    def shares_root_with(self, other: Poly) -> bool:
        """Whether the two polynomials have a common root."""
        a, b = self._promote(other)
        if a.degree <= 0 or b.degree <= 0:
            return False
        if a.field == "exact":
            return a.gcd(b).degree > 0
        return any(
            roots_equal(x, y) for x in a.roots().roots for y in b.roots().roots
        )

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            power = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if k > 0 and c == 1:
                terms.append(power)
            elif k > 0 and c == -1:
                terms.append(f"-{power}")
            else:
                terms.append(format_scalar(c) + (f"*{power}" if power else ""))
        return " + ".join(terms).replace("+ -", "- ")


def roots_equal(x: Scalar, y: Scalar, tol: float = config.ROOT_EQUALITY_TOL) -> bool:
    """Exact equality for rationals, relative closeness otherwise."""
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    return abs(complex(x) - complex(y)) <= tol * (1 + abs(complex(x)))


@dataclass(frozen=True)
class RootList:
    """Roots of a polynomial: ``lead · Π (z - r) · cofactor``."""

    roots: tuple[Scalar, ...]
    lead: Scalar
    cofactor: Poly

    def clusters(
        self, tol: float = config.ROOT_EQUALITY_TOL
    ) -> list[tuple[Scalar, int]]:
        """Group numerically equal roots into (root, multiplicity) pairs."""
        groups: list[list[Scalar]] = []
        for root in self.roots:
            for group in groups:
                if roots_equal(group[0], root, tol):
                    group.append(root)
                    break
            else:
                groups.append([root])
        return [(group[0], len(group)) for group in groups]

    def rebuild(self) -> Poly:
        """Multiply the roots and the cofactor back together."""
        return Poly.from_roots(self.roots, self.cofactor.field, self.lead) * self.cofactor


def wronskian2(p: Poly, q: Poly) -> Poly:
    """``p q' - q p'``."""
    return p * q.derivative() - q * p.derivative()


def log_derivative(p: Poly) -> RatFunc:
    """``p'/p``."""
    return RatFunc(p.derivative(), p)


@dataclass(frozen=True, slots=True)
class RatFunc:
    """A quotient of polynomials with a monic denominator.

    Exact values are kept in lowest terms, so equality is structural. Float
    values are only normalized to a monic denominator.
    """

    num: Poly
    den: Poly = dataclass_field(default_factory=Poly.one)

    def __post_init__(self) -> None:
        num, den = self.num._promote(self.den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            den = Poly.one(num.field)
        else:
            if num.field == "exact" and den.degree > 0:
                common = num.gcd(den)
                if common.degree > 0:
                    num, den = num.exact_div(common), den.exact_div(common)
            if den.lead != 1:
                inverse = 1 / den.lead
                num, den = num.scale(inverse), den.scale(inverse)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def coerce(cls, value: object, field: Field = "exact") -> RatFunc:
        """Promote a scalar or polynomial to a rational function."""
        match value:
            case RatFunc():
                return value
            case Poly():
                return cls(value, Poly.one(value.field))
        return cls(Poly.constant(value, field), Poly.one(field))

    @classmethod
    def zero(cls, field: Field = "exact") -> RatFunc:
        """The zero rational function."""
        return cls(Poly.zero(field), Poly.one(field))

    @classmethod
    def one(cls, field: Field = "exact") -> RatFunc:
        """The rational function 1."""
        return cls(Poly.one(field), Poly.one(field))

    @property
    def field(self) -> Field:
        """The field of the numerator."""
        return self.num.field

    @property
    def is_zero(self) -> bool:
        """Whether the numerator vanishes."""
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        """Whether the reduced denominator is a constant."""
        return self.den.degree == 0

    @property
    def degree(self) -> int:
        """``max(deg num, deg den)``, the degree that bounds sampled identity checks."""
        return max(self.num.degree, self.den.degree)

    @property
    def is_constant(self) -> bool:
        """Whether the function is a constant."""
        return self.is_polynomial and self.num.degree <= 0

    def as_poly(self) -> Poly:
        """The function as a polynomial; refuses proper fractions."""
        if not self.is_polynomial:
            raise DegenerateError(f"{self} is not a polynomial")
        return self.num.scale(1 / self.den.lead)

    def constant_value(self) -> Scalar:
        """The value of a constant function."""
        if not self.is_constant:
            raise DegenerateError(f"{self} is not constant")
        return self.num.coefficient(0)

    def _other(self, other: object) -> RatFunc:
        return RatFunc.coerce(other, self.field)

    def __add__(self, other: object) -> RatFunc:
        b = self._other(other)
        if self.is_zero:
            return b
        if b.is_zero:
            return self
        if self.den == b.den:
            return RatFunc(self.num + b.num, self.den)
        return RatFunc(self.num * b.den + b.num * self.den, self.den * b.den)

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: object) -> RatFunc:
        return self + (-self._other(other))

    def __rsub__(self, other: object) -> RatFunc:
        return self._other(other) - self

    def __mul__(self, other: object) -> RatFunc:
        b = self._other(other)
        if self.is_zero or b.is_zero:
            return RatFunc.zero(join_fields(self.field, b.field))
        return RatFunc(self.num * b.num, self.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> RatFunc:
        b = self._other(other)
        if b.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * b.den, self.den * b.num)

    def __rtruediv__(self, other: object) -> RatFunc:
        return self._other(other) / self

    def __pow__(self, exponent: int) -> RatFunc:
        if exponent < 0:
            return RatFunc.one(self.field) / (self ** (-exponent))
        return RatFunc(self.num**exponent, self.den**exponent)

    def __call__(self, x: object) -> object:
        return self.num(x) / self.den(x)

    def derivative(self) -> RatFunc:
        """Derivative by the quotient rule."""
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def sample_norm(self, points: Sequence[complex]) -> float:
        """Largest magnitude over sample points, skipping poles."""
        values = []
        for point in points:
            den = complex(self.den(point))
            if abs(den) > config.DENOMINATOR_GUARD:
                values.append(abs(complex(self.num(point)) / den))
        return max(values, default=0.0)

    def vanishes(self, tol: float = config.RESIDUAL_TOL) -> bool:
        """Exact: structural zero test. Float: relative coefficient test."""
        if self.field == "exact":
            return self.is_zero
        return self.num.norm() <= tol * max(1.0, self.den.norm())

    def __str__(self) -> str:
        if self.is_polynomial:
            return str(self.as_poly())
        return f"({self.num})/({self.den})"


def sample_points(degree: int, seed: int = config.SAMPLE_SEED) -> list[complex]:
    """``2·degree + 5`` random points in the square of half-width 2, drawn from a seeded generator."""
    rng = np.random.default_rng(seed)
    count = 2 * max(degree, 0) + config.SAMPLE_EXTRA_POINTS
    values = rng.uniform(-2.0, 2.0, size=(count, 2))
    return [complex(re, im) for re, im in values]


@dataclass(frozen=True)
class PolyUnknown:
    """An unknown polynomial of degree at most ``degree``."""

    name: str
    degree: int


@dataclass(frozen=True)
class PolyEquation:
    """``Σ_u Σ_k operators[u][k] · ∂^k u = rhs``."""

    operators: Mapping[str, Sequence[Poly]]
    rhs: Poly


@dataclass(frozen=True)
class PolySolveResult:
    """Outcome of ``poly_linear_solve``.

    ``particular`` sets every free coordinate to zero. ``kernel`` spans the
    homogeneous solutions. ``residual`` is the least-squares residual norm,
    which is the witness when the system is inconsistent.
    """

    status: SolveStatus
    particular: dict[str, Poly]
    kernel: tuple[dict[str, Poly], ...]
    residual: float


def _apply_operator(operator: Sequence[Poly], power: int, field: Field) -> Poly:
    basis = Poly.monomial(power, field)
    image = Poly.zero(field)
    for order, coefficient in enumerate(operator):
        if not coefficient.is_zero:
            image += coefficient * basis.derivative(order)
    return image


def poly_linear_solve(
    unknowns: Sequence[PolyUnknown],
    equations: Sequence[PolyEquation],
    field: Field,
    *,
    tol: float = config.LINEAR_TOL,
) -> PolySolveResult:
    """Solve polynomial-coefficient linear differential equations for polynomials.

    Every unknown is expanded in the monomial basis up to its degree bound and
    every equation is matched coefficient by coefficient. Exact mode row-reduces
    over the rationals; float mode uses least squares with a relative residual
    test and reads the kernel off the SVD.
    """
    columns = [(u.name, power) for u in unknowns for power in range(u.degree + 1)]
    rows: list[list[Scalar]] = []
    rhs: list[Scalar] = []
    for equation in equations:
        images = [
            _apply_operator(equation.operators.get(name, ()), power, field)
            for name, power in columns
        ]
        height = max([image.degree for image in images] + [equation.rhs.degree, 0]) + 1
        target = equation.rhs.as_field(field)
        for k in range(height):
            rows.append([image.coefficient(k) for image in images])
            rhs.append(target.coefficient(k))

    if not columns:
        witness = max((abs(value) for value in rhs), default=0.0)
        status: SolveStatus = "unique" if witness == 0 else "inconsistent"
        return PolySolveResult(status, {}, (), float(witness))

    if field == "exact":
        values, kernel, residual = _solve_exact(rows, rhs)
    else:
        values, kernel, residual = _solve_float(rows, rhs, tol)

    if values is None:
        status = "inconsistent"
        particular = {}
    else:
        status = "family" if kernel else "unique"
        particular = _split(columns, unknowns, values, field)
    return PolySolveResult(
        status,
        particular,
        tuple(_split(columns, unknowns, vector, field) for vector in kernel),
        residual,
    )


def _split(
    columns: list[tuple[str, int]],
    unknowns: Sequence[PolyUnknown],
    values: Sequence[Scalar],
    field: Field,
) -> dict[str, Poly]:
    coefficients: dict[str, list[Scalar]] = {
        u.name: [zero_scalar(field)] * (u.degree + 1) for u in unknowns
    }
    for (name, power), value in zip(columns, values, strict=True):
        coefficients[name][power] = value
    return {name: Poly(tuple(c), field) for name, c in coefficients.items()}


def _least_squares_residual(rows: list[list[Scalar]], rhs: list[Scalar]) -> float:
    a = np.array([[complex(float(c)) for c in row] for row in rows], dtype=complex)
    b = np.array([complex(float(c)) for c in rhs], dtype=complex)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    return float(np.linalg.norm(a @ x - b))


def _solve_exact(
    rows: list[list[Scalar]], rhs: list[Scalar]
) -> tuple[list[Scalar] | None, list[list[Scalar]], float]:
    width = len(rows[0])
    matrix = sympy.Matrix(
        len(rows), width, [scalar_to_sympy(c) for row in rows for c in row]
    )
    vector = sympy.Matrix(len(rhs), 1, [scalar_to_sympy(c) for c in rhs])
    reduced, pivots = matrix.row_join(vector).rref()
    kernel: list[list[Scalar]] = [
        [sympy_to_fraction(v[k]) for k in range(width)] for v in matrix.nullspace()
    ]
    if width in pivots:
        return None, kernel, _least_squares_residual(rows, rhs)
    values: list[Scalar] = [Fraction(0)] * width
    for row, column in enumerate(pivots):
        values[column] = sympy_to_fraction(reduced[row, width])
    return values, kernel, 0.0


def _solve_float(
    rows: list[list[Scalar]], rhs: list[Scalar], tol: float
) -> tuple[list[Scalar] | None, list[list[Scalar]], float]:
    a = np.array(rows, dtype=complex)
    b = np.array(rhs, dtype=complex)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ x - b))
    scale = max(1.0, float(np.linalg.norm(b)), float(np.linalg.norm(a) * np.linalg.norm(x)))

    _, singular, vh = np.linalg.svd(a)
    top = float(singular[0]) if singular.size else 0.0
    rank = int(np.sum(singular > tol * top)) if top > 0 else 0
    kernel = []
    for vector in vh[rank:].conj():
        pivot = vector[int(np.argmax(np.abs(vector)))]
        kernel.append([complex(v / pivot) for v in vector])

    if residual > tol * scale:
        logger.debug(f"Float system inconsistent: residual {residual:.3e}")
        return None, kernel, residual
    return [complex(v) for v in x], kernel, residual
