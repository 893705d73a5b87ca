import dataclasses
from fractions import Fraction

import pytest

from gaudin_qq.cartan import CartanTwist, cartan_from_label
from gaudin_qq.errors import DegenerateError, NotTypeAError
from gaudin_qq.matrix import RatMatrix
from gaudin_qq.oper import (
    backlund_gauge_element,
    backlund_matrix_check,
    cartan_part,
    chevalley_e,
    chevalley_f,
    constant_connection,
    coroot_matrix,
    gauge,
    miura_connection,
    root_exponential,
    twist_matrix,
    z_twist_check,
)
from gaudin_qq.polyring import Poly, RatFunc
from gaudin_qq.qqcore import QQSolution, assemble_solution, master_polynomials


def _sl2() -> QQSolution:
    cd = cartan_from_label("A1")
    master = master_polynomials(cd, [0], [[1]])
    return assemble_solution(cd, CartanTwist((Fraction(1, 2),)), master, [Poly((1, 1))])


def _a2() -> QQSolution:
    cd = cartan_from_label("A2")
    master = master_polynomials(cd, [0], [[1, 0]])
    return assemble_solution(cd, CartanTwist((1, 1)), master, [Poly((1, 1)), Poly.one()])


def _resonant() -> QQSolution:
    """Λ = z(z - 1) with ζ = 0: ⟨α, Z⟩ vanishes and q₋ is one member of a family."""
    cd = cartan_from_label("A1")
    master = master_polynomials(cd, [0, 1], [[1], [1]])
    return assemble_solution(cd, CartanTwist((0,)), master, [Poly((Fraction(-1, 2), 1))])


class TestMiuraConnection:
    def test_sl2_matrix(self) -> None:
        conn = miura_connection(_sl2())
        height = RatFunc(Poly.one(), Poly((1, 1))) - Fraction(1, 2)
        assert conn.matrix == RatMatrix.from_rows([[height, 0], [Poly((0, 1)), -height]])

    def test_upper_presentation_is_the_transpose(self) -> None:
        sol = _a2()
        assert miura_connection(sol, "upper").matrix == miura_connection(sol).matrix.transpose()

    def test_cartan_part(self) -> None:
        """The Cartan part is ``Z - Σ ∂log(q₊ⁱ) α̌_i`` in coroot coordinates."""
        [value] = cartan_part(miura_connection(_sl2()))
        assert value == RatFunc(Poly((Fraction(-1, 2), Fraction(1, 2))), Poly((1, 1)))

    def test_twist_matrix(self) -> None:
        a2 = cartan_from_label("A2")
        assert twist_matrix(a2, CartanTwist((1, 3))) == RatMatrix.diagonal([1, 2, -3])

    @pytest.mark.parametrize("i", [0, 1, 2])
    def test_chevalley_relation(self, i: int) -> None:
        e, f = chevalley_e(4, i), chevalley_f(4, i)
        assert e @ f - f @ e == coroot_matrix(4, i)

    def test_trace_must_vanish(self) -> None:
        with pytest.raises(DegenerateError):
            constant_connection(RatMatrix.identity(2))

    def test_requires_type_a(self) -> None:
        cd = cartan_from_label("B2")
        master = master_polynomials(cd, [0], [[1, 0]])
        sol = assemble_solution(cd, CartanTwist((1, 2)), master, [Poly.one(), Poly.one()])
        with pytest.raises(NotTypeAError):
            miura_connection(sol)


class TestGauge:
    def test_identity_gauge(self) -> None:
        conn = miura_connection(_a2())
        assert gauge(conn, RatMatrix.identity(3)) == conn

    def test_composition(self) -> None:
        """Gauging by g and then by h is gauging by g h."""
        conn = miura_connection(_a2())
        g = backlund_gauge_element(_a2(), 0)
        h = root_exponential(3, 1, RatFunc(Poly((1, 2)), Poly((3, 1))), negative=True)
        assert gauge(gauge(conn, g), h) == gauge(conn, g @ h)

    def test_backlund_gauge_element(self) -> None:
        element = backlund_gauge_element(_sl2(), 0)
        assert element == RatMatrix.from_rows([[1, RatFunc(Poly((-1,)), Poly((1, 1)))], [0, 1]])

    def test_sl2_backlund_gauge(self) -> None:
        check = backlund_matrix_check(_sl2(), 0)
        assert check["passed"], check
        assert check["residual"] == 0

    @pytest.mark.parametrize("node", [0, 1])
    def test_a2_backlund_gauge(self, node: int) -> None:
        assert backlund_matrix_check(_a2(), node)["passed"]

    def test_resonant_backlund_gauge(self) -> None:
        sol = _resonant()
        assert sol.family == (True,)
        check = backlund_matrix_check(sol, 0)
        assert check["passed"], check


class TestZTwistedCondition:
    def test_sl2(self) -> None:
        assert z_twist_check(_sl2())["passed"]

    def test_a2(self) -> None:
        check = z_twist_check(_a2())
        assert check["passed"], check
        assert check["name"] == "z-twisted"

    def test_resonant(self) -> None:
        assert z_twist_check(_resonant())["passed"]

    def test_corrupted_q_minus_fails(self) -> None:
        sol = dataclasses.replace(_sl2(), q_minus=(Poly((2,)),))
        check = z_twist_check(sol)
        assert not check["passed"]
        assert "witness" in check
