from fractions import Fraction

import numpy as np
import pytest

from gaudin_qq.backlund import full_qq_generate
from gaudin_qq.cartan import CartanTwist, cartan_from_label, identity_element, weyl_enumerate
from gaudin_qq.errors import NotTypeAError
from gaudin_qq.matrix import RatMatrix
from gaudin_qq.minors import generalized_minor
from gaudin_qq.oper import compare_matrices, constant_connection, gauge, miura_connection, twist_matrix
from gaudin_qq.polyring import Poly, RatFunc
from gaudin_qq.qqcore import QQSolution, assemble_solution, master_polynomials
from gaudin_qq.wronskian import (
    WronskianData,
    build_b_minus,
    build_g,
    build_n_plus,
    equivalent,
    matrix_checks,
    minor_qq_match,
    n_plus_after_gauge,
    random_unipotent_commutator,
    verify_wronskian_equation,
)


def _sl2() -> QQSolution:
    cd = cartan_from_label("A1")
    master = master_polynomials(cd, [0], [[1]])
    return assemble_solution(cd, CartanTwist((Fraction(1, 2),)), master, [Poly((1, 1))])


def _a2() -> QQSolution:
    cd = cartan_from_label("A2")
    master = master_polynomials(cd, [0], [[1, 0]])
    return assemble_solution(cd, CartanTwist((1, 1)), master, [Poly((1, 1)), Poly.one()])


def _resonant_tail() -> QQSolution:
    """ζ = (1, -1) makes the first and last diagonal entries of Z equal."""
    cd = cartan_from_label("A2")
    master = master_polynomials(cd, [0], [[1, 0]])
    return assemble_solution(cd, CartanTwist((1, -1)), master, [Poly.one(), Poly.one()])


def _inverse_z_plus_one() -> RatFunc:
    return RatFunc(Poly.one(), Poly((1, 1)))


class TestBuild:
    def test_sl2_matrices(self) -> None:
        wd = build_g(_sl2())
        assert wd.b_minus == RatMatrix.from_rows([[Poly((1, 1)), 0], [1, _inverse_z_plus_one()]])
        assert wd.n_plus == RatMatrix.from_rows(
            [[1, RatFunc(Poly((1, -1)), Poly((0, 2, 2)))], [0, 1]]
        )
        assert wd.g == RatMatrix.from_rows([
            [Poly((1, 1)), RatFunc(Poly((1, -1)), Poly((0, 2)))],
            [1, RatFunc(Poly.one(), Poly((0, 2)))],
        ])
        assert wd.g.determinant() == RatFunc.one()

    def test_a2_b_minus(self) -> None:
        expected = RatMatrix.from_rows([
            [Poly((1, 1)), 0, 0],
            [1, _inverse_z_plus_one(), 0],
            [Poly((Fraction(-1, 2), Fraction(1, 2))), RatFunc(Poly((0, 1)), Poly((1, 1))), 1],
        ])
        assert build_b_minus(_a2()) == expected

    def test_product_order(self) -> None:
        """In ascending order 𝒩₊ has nothing beyond the first superdiagonal."""
        ascending = build_n_plus(_a2())
        descending = build_n_plus(_a2(), ascending=False)
        assert ascending[0, 2].is_zero
        assert descending[0, 2] == _inverse_z_plus_one()
        for ordering in (True, False):
            gauged = n_plus_after_gauge(_a2(), ascending=ordering).matrix
            assert all(gauged[k, k].is_zero for k in range(3))

    def test_trivial_solution(self) -> None:
        cd = cartan_from_label("A2")
        master = master_polynomials(cd, [0], [[0, 0]])
        sol = assemble_solution(cd, CartanTwist((1, 3)), master, [Poly.one(), Poly.one()])
        wd = build_g(sol)
        assert wd.g.determinant() == RatFunc.one()
        assert all(check["passed"] for check in matrix_checks(wd))

    def test_requires_type_a(self) -> None:
        cd = cartan_from_label("B2")
        master = master_polynomials(cd, [0], [[1, 0]])
        sol = assemble_solution(cd, CartanTwist((1, 2)), master, [Poly.one(), Poly.one()])
        with pytest.raises(NotTypeAError):
            build_g(sol)


class TestTailKernels:
    def test_regular_twist_has_none(self) -> None:
        assert build_g(_a2()).tail_kernels == ()

    def test_resonant_entry_is_reported(self) -> None:
        wd = build_g(_resonant_tail())
        [kernel] = wd.tail_kernels
        assert (kernel.row, kernel.column) == (2, 0)
        assert kernel.direction == RatFunc.one()
        assert equivalent(wd, RatMatrix.identity(3)).tail_kernels == wd.tail_kernels

    @pytest.mark.parametrize("shift", [1, Fraction(-5, 2)])
    def test_moving_along_the_kernel_keeps_the_twisted_condition(self, shift: object) -> None:
        sol = _resonant_tail()
        wd = build_g(sol)
        [kernel] = wd.tail_kernels
        rows = [list(row) for row in wd.b_minus.rows]
        rows[kernel.row][kernel.column] = rows[kernel.row][kernel.column] + kernel.direction * shift
        moved = RatMatrix(tuple(tuple(r) for r in rows))
        trivial = constant_connection(-twist_matrix(sol.cartan, sol.twist))
        check = compare_matrices("moved", gauge(trivial, moved).matrix, miura_connection(sol).matrix)
        assert check["passed"], check


class TestChecks:
    @pytest.mark.parametrize("factory", [_sl2, _a2])
    def test_relations_hold(self, factory) -> None:
        relations = verify_wronskian_equation(build_g(factory()))
        assert {r["relation"] for r in relations} == {"top", "bottom", "vector"}
        assert all(r["passed"] for r in relations), relations

    @pytest.mark.parametrize("factory", [_sl2, _a2])
    def test_matrix_checks(self, factory) -> None:
        checks = matrix_checks(build_g(factory()))
        assert all(c["passed"] for c in checks), checks

    def test_corrupted_entry_breaks_the_relations(self) -> None:
        wd = build_g(_sl2())
        rows = [list(row) for row in wd.g.rows]
        rows[0][0] = rows[0][0] + 1
        broken = WronskianData(wd.solution, wd.b_minus, wd.n_plus, RatMatrix(tuple(tuple(r) for r in rows)))
        relations = verify_wronskian_equation(broken)
        assert not all(r["passed"] for r in relations)


class TestMinorMatch:
    def test_sl2(self) -> None:
        sol = _sl2()
        matches = minor_qq_match(build_g(sol), full_qq_generate(sol))
        assert len(matches) == 2
        assert all(m["passed"] for m in matches)
        assert matches[0]["minor"] == "z + 1"
        assert matches[0]["constant"] == "1"

    def test_a2(self) -> None:
        sol = _a2()
        matches = minor_qq_match(build_g(sol), full_qq_generate(sol))
        assert len(matches) == 12
        assert all(m["passed"] for m in matches), matches


class TestEquivalence:
    def test_commutator_unipotent_shape(self) -> None:
        u = random_unipotent_commutator(4, np.random.default_rng(0))
        assert u.is_unipotent_upper()
        assert all(u[k, k + 1].is_zero for k in range(3))

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(10))
    def test_minors_and_relations_are_invariant(self, seed: int) -> None:
        sol = _a2()
        wd = build_g(sol)
        moved = equivalent(wd, random_unipotent_commutator(3, np.random.default_rng(seed)))
        identity = identity_element(sol.cartan)
        for w in weyl_enumerate(sol.cartan):
            for i in range(2):
                assert generalized_minor(moved.g, w, identity, i) == generalized_minor(wd.g, w, identity, i)
        assert all(r["passed"] for r in verify_wronskian_equation(moved))
        assert all(m["passed"] for m in minor_qq_match(moved, full_qq_generate(sol)))
