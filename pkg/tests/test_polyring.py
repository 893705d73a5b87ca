from fractions import Fraction

import pytest

from gaudin_qq.errors import DegenerateError
from gaudin_qq.polyring import (
    Poly,
    PolyEquation,
    PolyUnknown,
    RatFunc,
    log_derivative,
    poly_linear_solve,
    rationalize,
    sample_points,
    to_scalar,
    wronskian2,
)


def _z() -> Poly:
    return Poly((0, 1))


class TestPoly:
    def test_trailing_zeros_are_stripped(self) -> None:
        """The zero polynomial has degree -1 and an empty coefficient tuple."""
        assert Poly((1, 2, 0, 0)).degree == 1
        assert Poly((0, 0)).is_zero
        assert Poly.zero().degree == -1

    def test_arithmetic(self) -> None:
        z = _z()
        assert (z + 1) * (z - 1) == Poly((-1, 0, 1))
        assert (z + 1) ** 3 == Poly((1, 3, 3, 1))
        assert 2 - z == Poly((2, -1))

    def test_mixed_fields_promote_to_float(self) -> None:
        total = Poly((1, 1)) + Poly((0.5,), "float")
        assert total.field == "float"
        assert total.coefficient(0) == pytest.approx(1.5)

    def test_evaluation_and_derivative(self) -> None:
        p = Poly((1, -3, 0, 2))
        assert p(Fraction(1, 2)) == Fraction(1, 4) - Fraction(3, 2) + 1
        assert p.derivative() == Poly((-3, 0, 6))
        assert p.derivative(2) == Poly((0, 12))

    def test_wronskian2(self) -> None:
        z = _z()
        assert wronskian2(z + 1, z + 1).is_zero
        assert wronskian2(z + 1, Poly.one()) == Poly((-1,))
        assert wronskian2(z**2, z) == Poly((0, 0, -1))

    def test_monic_is_exact_in_float_mode(self) -> None:
        p = Poly((1.0, 3.0), "float").monic()
        assert p.lead == 1

    def test_monic_of_zero_is_refused(self) -> None:
        with pytest.raises(DegenerateError):
            Poly.zero().monic()

    def test_divmod_and_gcd(self) -> None:
        a = Poly((-1, 0, 1))
        b = Poly((1, -2, 1))
        quotient, remainder = divmod(a, Poly((-1, 1)))
        assert quotient == Poly((1, 1))
        assert remainder.is_zero
        assert a.gcd(b) == Poly((-1, 1))
        assert a.exact_div(Poly((1, 1))) == Poly((-1, 1))

    def test_exact_roots_keep_irreducible_cofactor(self) -> None:
        """Rational roots are split off; what is left stays as a monic cofactor."""
        p = Poly.from_roots([Fraction(1, 2), -3]) * Poly((1, 0, 1))
        found = p.roots()
        assert found.roots == (Fraction(-3), Fraction(1, 2))
        assert found.cofactor == Poly((1, 0, 1))
        assert found.rebuild() == p

    def test_float_roots(self) -> None:
        found = Poly((1, 0, 1), "float").roots()
        assert sorted(r.imag for r in found.roots) == pytest.approx([-1.0, 1.0])

    def test_squarefree_and_shared_roots(self) -> None:
        z = _z()
        assert not ((z - 1) ** 2).is_squarefree()
        assert (z * (z - 1)).is_squarefree()
        assert (z * (z - 1)).shares_root_with(z - 1)
        assert not (z + 1).shares_root_with(z - 1)

    def test_str(self) -> None:
        assert str(Poly((1, 1))) == "z + 1"
        assert str(Poly((-1, 0, 1))) == "z^2 - 1"
        assert str(Poly((Fraction(1, 2), 0, 1))) == "z^2 + 1/2"


class TestSamplePoints:
    @pytest.mark.parametrize("degree", [0, 1, 4, 9])
    def test_count_grows_with_degree(self, degree: int) -> None:
        assert len(sample_points(degree)) == 2 * degree + 5

    def test_seeded(self) -> None:
        assert sample_points(3) == sample_points(3)
        assert sample_points(3, seed=1) != sample_points(3)
        assert all(abs(p.real) <= 2 and abs(p.imag) <= 2 for p in sample_points(3))


class TestScalars:
    def test_to_scalar(self) -> None:
        assert to_scalar("3/4", "exact") == Fraction(3, 4)
        assert to_scalar(Fraction(1, 2), "float") == 0.5 + 0j

    def test_rationalize(self) -> None:
        assert rationalize(complex(0.5000000001, 0.0), 1000) == Fraction(1, 2)
        assert rationalize(complex(0.5, 0.3), 1000) is None


class TestRatFunc:
    def test_lowest_terms(self) -> None:
        assert RatFunc(Poly((-1, 0, 1)), Poly((-1, 1))) == RatFunc(Poly((1, 1)))

    def test_denominator_is_monic(self) -> None:
        value = RatFunc(Poly((1,)), Poly((2, 2)))
        assert value.den == Poly((1, 1))
        assert value.num == Poly((Fraction(1, 2),))

    def test_log_derivative(self) -> None:
        assert log_derivative(Poly((0, 0, 1))) == RatFunc(Poly((2,)), Poly((0, 1)))

    def test_field_operations(self) -> None:
        x = RatFunc(Poly((1,)), Poly((1, 1)))
        assert x.derivative() == RatFunc(Poly((-1,)), Poly((1, 2, 1)))
        assert (x * Poly((1, 1))).is_constant
        assert (x / x) == RatFunc.one()
        assert x**-1 == RatFunc(Poly((1, 1)))
        assert (x - x).is_zero

    def test_zero_denominator(self) -> None:
        with pytest.raises(ZeroDivisionError):
            RatFunc(Poly((1,)), Poly.zero())


class TestPolyLinearSolve:
    def test_unique_solution(self) -> None:
        """``q' + q = z + 1`` has the unique polynomial solution ``q = z``."""
        equation = PolyEquation({"q": (Poly.one(), Poly.one())}, Poly((1, 1)))
        result = poly_linear_solve([PolyUnknown("q", 1)], [equation], "exact")
        assert result.status == "unique"
        assert result.particular["q"] == _z()

    def test_family(self) -> None:
        """``q' = 1`` fixes q only up to a constant."""
        equation = PolyEquation({"q": (Poly.zero(), Poly.one())}, Poly.one())
        result = poly_linear_solve([PolyUnknown("q", 2)], [equation], "exact")
        assert result.status == "family"
        assert result.particular["q"] == _z()
        [direction] = result.kernel
        assert direction["q"].degree == 0

    def test_inconsistent_reports_witness(self) -> None:
        equation = PolyEquation({"q": (Poly.zero(), Poly.one())}, _z())
        result = poly_linear_solve([PolyUnknown("q", 0)], [equation], "exact")
        assert result.status == "inconsistent"
        assert result.residual > 0

    def test_float_matches_exact(self) -> None:
        equation = PolyEquation(
            {"q": (Poly.one("float"), Poly.one("float"))}, Poly((1, 1), "float")
        )
        result = poly_linear_solve([PolyUnknown("q", 1)], [equation], "float")
        assert result.status == "unique"
        q = result.particular["q"]
        assert q.coefficient(1) == pytest.approx(1)
        assert abs(q.coefficient(0)) < 1e-12
