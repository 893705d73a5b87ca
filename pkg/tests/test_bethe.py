import random
from fractions import Fraction

import numpy as np
import pytest

from gaudin_qq.bethe import (
    BetheConfiguration,
    GaudinProblem,
    bethe_jacobian,
    bethe_residual,
    bethe_solve,
    escape_radius,
    qq_to_roots,
    rationalize_configuration,
    residual_max,
    roots_to_qq,
    scaled_residual,
)
from gaudin_qq.cartan import CartanTwist, cartan_from_label
from gaudin_qq.errors import CollisionError, ConfigError
from gaudin_qq.polyring import Poly
from gaudin_qq.qqcore import master_polynomials, solution_residual_norm


def _problem(
    label: str,
    points: list[object],
    coweights: list[list[int]],
    zeta: tuple[object, ...],
    degrees: tuple[int, ...],
) -> GaudinProblem:
    cd = cartan_from_label(label)
    return GaudinProblem(cd, master_polynomials(cd, points, coweights), CartanTwist(zeta), degrees)


def _sl2_problem() -> GaudinProblem:
    return _problem("A1", [0], [[1]], (Fraction(1, 2),), (1,))


def _assert_bijection(problem: GaudinProblem, seed: int) -> None:
    found = bethe_solve(problem, seed=seed)
    assert found
    images = []
    for cfg in found:
        sol = roots_to_qq(problem, cfg)
        assert solution_residual_norm(sol) <= 1e-8
        back = qq_to_roots(sol)
        for node_back, node_cfg in zip(back.roots, cfg.roots, strict=True):
            for x in node_back:
                assert min(abs(complex(x) - complex(y)) for y in node_cfg) <= 1e-7
        images.append(sol.q_plus)
    for a in range(len(images)):
        for b in range(a):
            assert any(
                max(abs(complex(x) - complex(y)) for x, y in zip(p.coeffs, q.coeffs, strict=True)) > 1e-6
                for p, q in zip(images[a], images[b], strict=True)
            )


class TestBetheResidual:
    def test_sl2_root(self) -> None:
        problem = _sl2_problem()
        assert bethe_residual(problem, BetheConfiguration.make([[Fraction(-1)]])) == [0]
        assert bethe_residual(problem, BetheConfiguration.make([[Fraction(1)]])) == [2]

    def test_a2_root(self) -> None:
        problem = _problem("A2", [0], [[1, 0]], (1, 1), (1, 0))
        assert residual_max(problem, BetheConfiguration.make([[Fraction(-1)], []])) == 0

    def test_collisions(self) -> None:
        problem = _sl2_problem()
        with pytest.raises(CollisionError):
            bethe_residual(problem, BetheConfiguration.make([[Fraction(0)]]))
        two = _problem("A1", [0], [[1]], (1,), (2,))
        with pytest.raises(CollisionError):
            bethe_residual(two, BetheConfiguration.make([[Fraction(1), Fraction(1)]]))

    def test_shape_is_checked(self) -> None:
        with pytest.raises(ConfigError):
            bethe_residual(_sl2_problem(), BetheConfiguration.make([[]]))

    def test_negative_degrees_are_refused(self) -> None:
        with pytest.raises(ConfigError):
            _problem("A1", [0], [[1]], (1,), (-1,))

    def test_jacobian_matches_finite_differences(self) -> None:
        problem = _problem("A2", [0, 1], [[1, 0], [0, 1]], (1, 2), (2, 1)).as_field("float")
        cfg = BetheConfiguration(((0.3 + 0.2j, -0.7 + 0.1j), (1.9 - 0.4j,)))
        jacobian = bethe_jacobian(problem, cfg)
        base = np.array(bethe_residual(problem, cfg))
        flat = cfg.flat()
        h = 1e-7
        for k in range(len(flat)):
            moved = list(flat)
            moved[k] += h
            shifted = BetheConfiguration(((moved[0], moved[1]), (moved[2],)))
            column = (np.array(bethe_residual(problem, shifted)) - base) / h
            assert np.allclose(column, jacobian[:, k], atol=1e-5)


class TestBetheSolve:
    def test_sl2(self) -> None:
        [cfg] = bethe_solve(_sl2_problem(), seed=0)
        assert abs(cfg.roots[0][0] + 1) < 1e-8
        exact = rationalize_configuration(_sl2_problem(), cfg)
        assert exact is not None
        assert exact.roots == ((Fraction(-1),),)

    def test_trivial_degrees(self) -> None:
        problem = _problem("A2", [0], [[1, 0]], (1, 1), (0, 0))
        [cfg] = bethe_solve(problem)
        assert cfg.roots == ((), ())

    def test_deterministic(self) -> None:
        problem = _problem("A1", [0, 1], [[1], [1]], (Fraction(1, 3),), (1,))
        first = bethe_solve(problem, seed=3, starts=16)
        second = bethe_solve(problem, seed=3, starts=16, workers=4)
        assert first == second

    def test_irrational_roots_do_not_rationalize(self) -> None:
        """Two marked points with ζ = 1/3 give the roots of 2w^2 + 4w - 3, both irrational."""
        problem = _problem("A1", [0, 1], [[1], [1]], (Fraction(1, 3),), (1,))
        found = bethe_solve(problem, seed=0)
        assert found
        for cfg in found:
            assert rationalize_configuration(problem, cfg) is None

    def test_finds_every_solution_of_a_quadratic(self) -> None:
        """2w^2 + 4w - 3 = 0 has exactly the two roots -1 ± √10/2."""
        problem = _problem("A1", [0, 1], [[1], [1]], (Fraction(1, 3),), (1,))
        found = bethe_solve(problem, seed=0)
        assert len(found) == 2
        roots = sorted(complex(cfg.roots[0][0]).real for cfg in found)
        assert roots == pytest.approx([-1 - np.sqrt(10) / 2, -1 + np.sqrt(10) / 2], abs=1e-8)
        assert all(abs(complex(cfg.roots[0][0]).imag) < 1e-8 for cfg in found)

    @pytest.mark.parametrize("seed", [0, 1, 7])
    def test_resonant_twist_has_one_solution(self, seed: int) -> None:
        """With ζ = 0 the only Bethe root is the midpoint; escaping starts are discarded."""
        problem = _problem("A1", [0, 1], [[1], [1]], (0,), (1,))
        [cfg] = bethe_solve(problem, seed=seed)
        assert abs(complex(cfg.roots[0][0]) - 0.5) < 1e-8

    def test_two_roots_at_one_node(self) -> None:
        """Λ = z^2, ζ = 1 and two roots: the only solution is the pair (-1 ± i)/2."""
        problem = _problem("A1", [0], [[2]], (1,), (2,))
        found = bethe_solve(problem, seed=0)
        assert len(found) == 1
        low, high = sorted((complex(w) for w in found[0].roots[0]), key=lambda w: w.imag)
        assert low == pytest.approx(-0.5 - 0.5j, abs=1e-8)
        assert high == pytest.approx(-0.5 + 0.5j, abs=1e-8)


class TestNewtonSafeguards:
    def test_scaled_residual_grows_with_the_roots(self) -> None:
        f = np.array([1e-9])
        assert scaled_residual(f, np.array([1.0 + 0j])) == pytest.approx(1e-9)
        assert scaled_residual(f, np.array([1e6 + 0j])) == pytest.approx(1e-3)
        assert scaled_residual(np.array([]), np.array([])) == 0.0

    def test_escape_radius(self) -> None:
        regular = _problem("A1", [0, 1], [[1], [1]], (Fraction(1, 3),), (1,))
        resonant = _problem("A1", [0, 1], [[1], [1]], (0,), (1,))
        assert 10 < escape_radius(regular) < float("inf")
        assert 10 < escape_radius(resonant) < float("inf")
        far = _problem("A1", [0, 100], [[1], [1]], (Fraction(1, 3),), (1,))
        assert escape_radius(far) > escape_radius(regular)


class TestQQBijection:
    @pytest.mark.parametrize("seed", range(5))
    def test_roots_round_trip(self, seed: int) -> None:
        """Bethe roots give a qq-solution whose q₊ has the same roots."""
        rng = random.Random(seed)
        points = [rng.randint(-3, 3) + rng.choice([0, Fraction(1, 2)]) for _ in range(2)]
        if points[0] == points[1]:
            points[1] += 5
        zeta = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        problem = _problem("A1", points, [[1], [1]], (zeta,), (1,))
        for cfg in bethe_solve(problem, seed=seed, starts=32):
            sol = roots_to_qq(problem, cfg)
            assert solution_residual_norm(sol) <= 1e-8
            back = qq_to_roots(sol)
            for x, y in zip(back.flat(), cfg.flat(), strict=True):
                assert abs(complex(x) - complex(y)) <= 1e-7

    @pytest.mark.parametrize("seed", range(5))
    def test_sl3_round_trip(self, seed: int) -> None:
        rng = random.Random(100 + seed)
        points = [Fraction(rng.randint(-4, 0)), Fraction(rng.randint(1, 4))]
        zeta = (Fraction(rng.randint(1, 4), 3), 2 + Fraction(rng.randint(1, 4), 7))
        problem = _problem("A2", points, [[1, 0], [0, 1]], zeta, (1, 1))
        _assert_bijection(problem, seed)

    @pytest.mark.parametrize("seed", range(5))
    def test_two_roots_round_trip(self, seed: int) -> None:
        rng = random.Random(200 + seed)
        points = [Fraction(rng.randint(-4, 0)), Fraction(rng.randint(1, 4))]
        zeta = (Fraction(rng.randint(1, 5), 2),)
        problem = _problem("A1", points, [[1], [2]], zeta, (2,))
        _assert_bijection(problem, seed)

    def test_exact_round_trip(self) -> None:
        problem = _problem("A2", [0], [[1, 0]], (1, 1), (1, 0))
        cfg = BetheConfiguration.make([[Fraction(-1)], []])
        sol = roots_to_qq(problem, cfg)
        assert sol.q_plus == (Poly((1, 1)), Poly.one())
        assert qq_to_roots(sol) == cfg
