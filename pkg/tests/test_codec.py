import json
from fractions import Fraction
from pathlib import Path

import pytest

from gaudin_qq.codec import (
    load_scenario,
    load_solutions,
    parse_poly,
    parse_scalar,
    parse_scenario,
    read_document,
    solution_from_record,
    write_document,
)
from gaudin_qq.errors import ConfigError
from gaudin_qq.pipeline import solve_scenario
from gaudin_qq.polyring import Poly


def _sl2_record(**overrides: object) -> dict:
    record: dict = {
        "group": "A1",
        "marked_points": [0],
        "coweights": [[1]],
        "twist": ["1/2"],
        "degrees": [1],
    }
    record.update(overrides)
    return record


def _write(tmp_path: Path, record: dict) -> tuple[Path, str]:
    text = json.dumps(record, indent=4)
    path = tmp_path / "scenario.json"
    path.write_text(text)
    return path, text


def _line(text: str, key: str) -> int:
    return next(n for n, line in enumerate(text.splitlines(), start=1) if f'"{key}"' in line)


class TestParseScalar:
    def test_forms(self) -> None:
        assert parse_scalar("3/4", "exact") == Fraction(3, 4)
        assert parse_scalar(0.1, "exact") == Fraction(1, 10)
        assert parse_scalar([1.5, 0], "exact") == Fraction(3, 2)
        assert parse_scalar([1, 2], "float") == 1 + 2j
        assert parse_scalar("-2", "float") == -2 + 0j

    @pytest.mark.parametrize("value", [True, "abc", [1, 2, 3], None])
    def test_rejects(self, value: object) -> None:
        with pytest.raises(ConfigError):
            parse_scalar(value, "float")

    def test_complex_is_not_exact(self) -> None:
        with pytest.raises(ConfigError):
            parse_scalar([0, 1], "exact")

    def test_poly(self) -> None:
        assert parse_poly(["1", "1/2", 0], "exact") == Poly((1, Fraction(1, 2)))


class TestScenario:
    def test_sl2(self) -> None:
        scenario = parse_scenario(_sl2_record())
        problem = scenario.problem()
        assert scenario.mode == "exact"
        assert problem.degrees == (1,)
        assert problem.twist.zeta == (Fraction(1, 2),)
        assert problem.master.lambdas == (Poly((0, 1)),)
        assert scenario.problem("float").field == "float"

    def test_cartan_matrix_and_lambdas(self) -> None:
        record = _sl2_record(
            group=[[2, -1], [-1, 2]],
            marked_points=[],
            coweights=[],
            twist=[1, 1],
            degrees=[1, 0],
            lambdas=[["0", "1"], ["1"]],
        )
        problem = parse_scenario(record).problem()
        assert problem.cartan.label == "A2"
        assert problem.master.lambdas == (Poly((0, 1)), Poly.one())

    def test_malformed_json_reports_line(self, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text('{\n    "group": "A1",\n    "degrees": [1,,]\n}\n')
        with pytest.raises(ConfigError) as excinfo:
            load_scenario(path)
        assert excinfo.value.line == 3

    def test_negative_degrees_point_at_degrees(self, tmp_path: Path) -> None:
        path, text = _write(tmp_path, _sl2_record(degrees=[-1]))
        with pytest.raises(ConfigError) as excinfo:
            load_scenario(path)
        assert excinfo.value.line == _line(text, "degrees")
        assert "nonnegative" in str(excinfo.value)

    def test_schema_violation_points_at_key(self, tmp_path: Path) -> None:
        path, text = _write(tmp_path, _sl2_record(mode="symbolic"))
        with pytest.raises(ConfigError) as excinfo:
            load_scenario(path)
        assert excinfo.value.line == _line(text, "mode")

    def test_bad_group_points_at_group(self, tmp_path: Path) -> None:
        path, text = _write(tmp_path, _sl2_record(group="A0"))
        with pytest.raises(ConfigError) as excinfo:
            load_scenario(path)
        assert excinfo.value.line == _line(text, "group")

    def test_coweight_mismatch(self) -> None:
        with pytest.raises(ConfigError):
            parse_scenario(_sl2_record(coweights=[[1], [1]]))


class TestDocuments:
    def test_solutions_round_trip(self, tmp_path: Path) -> None:
        scenario = parse_scenario(_sl2_record())
        document = solve_scenario(scenario)
        path = tmp_path / "solutions.json"
        write_document(document, path)
        assert path.read_text().endswith("}\n")

        loaded_scenario, loaded = load_solutions(path)
        assert loaded == json.loads(json.dumps(document))
        [record] = loaded["solutions"]
        assert record["roots"] == [["-1"]]
        sol, cfg = solution_from_record(loaded_scenario, record, record["mode"])
        assert sol.q_plus == (Poly((1, 1)),)
        assert sol.q_minus == (Poly.one(),)
        assert cfg.roots == ((Fraction(-1),),)

    def test_write_validates(self, tmp_path: Path) -> None:
        document = {"format": "gaudin-qq/verify", "version": 1, "checks": [], "passed": True}
        with pytest.raises(ConfigError):
            write_document(document, tmp_path / "verify.json")  # type: ignore[arg-type]
        assert not (tmp_path / "verify.json").exists()

    def test_read_checks_format(self, tmp_path: Path) -> None:
        path = tmp_path / "verify.json"
        document = {
            "format": "gaudin-qq/verify",
            "version": 1,
            "tolerance": 1e-10,
            "checks": [],
            "passed": True,
        }
        write_document(document, path)  # type: ignore[arg-type]
        assert read_document(path)["passed"]
        with pytest.raises(ConfigError):
            read_document(path, "gaudin-qq/solutions")

        other = tmp_path / "other.json"
        other.write_text('{"hello": 1}\n')
        with pytest.raises(ConfigError):
            read_document(other)
