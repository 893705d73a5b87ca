import copy
from unittest.mock import MagicMock, patch

import pytest

from gaudin_qq.cartan import cartan_from_label
from gaudin_qq.codec import parse_scenario
from gaudin_qq.errors import ConfigError, InconsistentSystemError, NotTypeAError, SolutionIndexError
from gaudin_qq.pipeline import (
    SolveOptions,
    braid_words,
    orbit_document,
    pick_solution,
    solve_scenario,
    verify_document,
    wronskian_document,
)


def _scenario(group: str, points: list, coweights: list, twist: list, degrees: list, **extra: object):
    record = {
        "group": group,
        "marked_points": points,
        "coweights": coweights,
        "twist": twist,
        "degrees": degrees,
        **extra,
    }
    return parse_scenario(record)


def _sl2():
    return _scenario("A1", [0], [[1]], ["1/2"], [1])


def _a2():
    return _scenario("A2", [0], [[1, 0]], [1, 1], [1, 0])


class TestSolve:
    def test_sl2(self) -> None:
        document = solve_scenario(_sl2())
        [record] = document["solutions"]
        assert record["roots"] == [["-1"]]
        assert record["q_plus"] == [["1", "1"]]
        assert record["q_minus"] == [["1"]]
        assert record["bethe_residual"] == 0
        assert record["mode"] == "exact"

    def test_trivial_degrees(self) -> None:
        document = solve_scenario(_scenario("A2", [0], [[1, 0]], [1, 1], [0, 0]))
        [record] = document["solutions"]
        assert record["roots"] == [[], []]
        assert record["q_plus"] == [["1"], ["1"]]

    def test_irrational_roots_stay_float(self) -> None:
        document = solve_scenario(_scenario("A1", [0, 1], [[1], [1]], ["1/3"], [1]))
        assert len(document["solutions"]) == 2
        assert all(record["mode"] == "float" for record in document["solutions"])

    def test_float_mode(self) -> None:
        document = solve_scenario(_sl2(), SolveOptions(mode="float"))
        [record] = document["solutions"]
        assert record["mode"] == "float"
        re, im = record["roots"][0][0]
        assert re == pytest.approx(-1)
        assert im == pytest.approx(0, abs=1e-8)

    def test_deterministic(self) -> None:
        scenario = _scenario("A1", [0, 1], [[1], [1]], ["1/3"], [1])
        assert solve_scenario(scenario) == solve_scenario(scenario, SolveOptions(workers=3))

    @patch("gaudin_qq.pipeline.roots_to_qq")
    def test_unpaired_roots_are_recorded(self, mock_roots_to_qq: MagicMock) -> None:
        mock_roots_to_qq.side_effect = InconsistentSystemError(0, 0.25)
        document = solve_scenario(_sl2())
        assert document["solutions"] == []
        [unpaired] = document["unpaired"]
        assert unpaired["roots"] == [["-1"]]
        assert "node 1" in unpaired["reason"]

    def test_paired_roots_leave_nothing_unpaired(self) -> None:
        assert solve_scenario(_a2())["unpaired"] == []


class TestVerify:
    def test_sl2_passes(self) -> None:
        scenario = _sl2()
        report = verify_document(scenario, solve_scenario(scenario))
        assert report["passed"]
        [check] = report["checks"]
        assert check["bethe_residual"] == 0
        assert check["nodes"][0]["qq_residual"] == 0
        assert check["nondegeneracy"]["passed"]

    def test_corrupted_q_minus_fails(self) -> None:
        scenario = _sl2()
        document = copy.deepcopy(solve_scenario(scenario))
        document["solutions"][0]["q_minus"] = [["2"]]
        report = verify_document(scenario, document)
        assert not report["passed"]
        assert not report["checks"][0]["nodes"][0]["passed"]
        assert report["checks"][0]["bethe_residual"] == 0

    def test_resonant_family_is_informational(self) -> None:
        """With ⟨α, Z⟩ = 0 the node is flagged resonant but still passes."""
        scenario = _scenario("A1", [0, 1], [[1], [1]], [0], [1])
        document = solve_scenario(scenario)
        [record] = document["solutions"]
        assert record["roots"] == [["1/2"]]
        assert record["family"] == [True]
        assert record["q_minus"] == [["0", "0", "1"]]
        report = verify_document(scenario, document)
        assert report["passed"]
        assert report["checks"][0]["nodes"][0]["resonant"]

    def test_float_tolerance(self) -> None:
        scenario = _sl2()
        document = solve_scenario(scenario, SolveOptions(mode="float"))
        assert verify_document(scenario, document, 1e-6)["passed"]
        assert verify_document(scenario, document, 1e-6)["tolerance"] == 1e-6

    def test_exact_solution_rechecked_in_float(self) -> None:
        scenario = _sl2()
        report = verify_document(scenario, solve_scenario(scenario), 1e-9, mode="float")
        assert report["passed"]
        assert report["checks"][0]["bethe_residual"] == pytest.approx(0, abs=1e-12)

    def test_float_solution_refuses_exact_mode(self) -> None:
        scenario = _sl2()
        document = solve_scenario(scenario, SolveOptions(mode="float"))
        with pytest.raises(ConfigError, match="exact mode"):
            verify_document(scenario, document, mode="exact")


class TestOrbit:
    def test_sl2(self) -> None:
        scenario = _sl2()
        full = orbit_document(scenario, solve_scenario(scenario))
        assert full["passed"]
        assert full["weyl_order"] == 2
        assert [entry["word"] for entry in full["entries"]] == ["", "1"]
        assert full["entries"][1]["twist"] == ["-1/2"]
        assert full["entries"][1]["weight_matches"]
        assert not full["entries"][1]["dot_weight_matches"]

    def test_a2(self) -> None:
        scenario = _a2()
        full = orbit_document(scenario, solve_scenario(scenario), workers=2)
        assert full["passed"]
        assert len(full["entries"]) == 6
        assert full["braids"] == [{"first": "121", "second": "212", "passed": True}]

    def test_cap_echoes_the_seed(self) -> None:
        scenario = _sl2()
        full = orbit_document(scenario, solve_scenario(scenario), cap=1)
        assert full["truncated"]
        assert full["weyl_order"] == 2
        assert len(full["entries"]) == 1
        assert full["braids"] == []
        assert full["passed"]

    def test_index_out_of_range(self) -> None:
        scenario = _sl2()
        with pytest.raises(SolutionIndexError):
            pick_solution(scenario, solve_scenario(scenario), 3)

    def test_float_override(self) -> None:
        scenario = _sl2()
        full = orbit_document(scenario, solve_scenario(scenario), mode="float", tol=1e-9)
        assert full["passed"]
        assert full["entries"][1]["twist"] == [[-0.5, 0.0]]


class TestWronskian:
    def test_sl2(self) -> None:
        scenario = _sl2()
        report = wronskian_document(scenario, solve_scenario(scenario))
        assert report["passed"]
        assert report["g"][0][0]["text"] == "z + 1"
        assert report["g"][1][0]["text"] == "1"
        assert len(report["minor_matches"]) == 2
        assert len(report["minor_table"]) == 4

    def test_a2(self) -> None:
        scenario = _a2()
        report = wronskian_document(scenario, solve_scenario(scenario))
        assert report["passed"]
        assert len(report["minor_matches"]) == 12
        assert report["tail_kernels"] == []
        assert all(row["row_set_agrees"] for row in report["minor_table"])

    def test_resonant_tail_is_exposed(self) -> None:
        scenario = _scenario("A2", [0], [[1, 0]], [1, -1], [0, 0])
        report = wronskian_document(scenario, solve_scenario(scenario))
        [kernel] = report["tail_kernels"]
        assert (kernel["row"], kernel["column"]) == (3, 1)
        assert kernel["direction"]["text"] == "1"

    def test_refuses_other_types(self) -> None:
        scenario = _scenario("B2", [0], [[1, 0]], [1, 2], [0, 0])
        with pytest.raises(NotTypeAError):
            wronskian_document(scenario, solve_scenario(scenario))


def test_braid_words() -> None:
    assert braid_words(cartan_from_label("A2")) == [((0, 1, 0), (1, 0, 1))]
    [(first, second)] = braid_words(cartan_from_label("G2"))
    assert first == (0, 1, 0, 1, 0, 1)
    assert second == (1, 0, 1, 0, 1, 0)
    assert len(braid_words(cartan_from_label("A3"))) == 3
