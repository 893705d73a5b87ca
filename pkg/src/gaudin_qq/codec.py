"""Reading scenarios and reading/writing the JSON documents produced by the CLI."""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from .bethe import BetheConfiguration, GaudinProblem
from .cartan import CartanData, CartanTwist, cartan_from_label, cartan_from_matrix
from .errors import ConfigError, GaudinError
from .matrix import RatMatrix
from .polyring import Field, Poly, RatFunc, Scalar
from .qqcore import MasterData, QQSolution, master_polynomials
from .schema import (
    AnyDocument,
    Mode,
    PolyRecord,
    RatFuncRecord,
    ScalarRecord,
    ScenarioRecord,
    SolutionRecord,
    SolutionsDocument,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

_SCHEMA_FILES = {
    "scenario": "scenario.schema.json",
    "gaudin-qq/solutions": "solutions.schema.json",
    "gaudin-qq/verify": "verify.schema.json",
    "gaudin-qq/orbit": "orbit.schema.json",
    "gaudin-qq/wronskian": "wronskian.schema.json",
}


def load_schema(name: str) -> dict:
    """Load one of the JSON Schemas shipped in ``gaudin_qq/schemas``."""
    path = resources.files("gaudin_qq") / "schemas" / _SCHEMA_FILES[name]
    return json.loads(path.read_text())


# Fragments of library error messages and the scenario key they point at.
_ERROR_KEYS = (
    ("twist", "twist"),
    ("root counts", "degrees"),
    ("coweight", "coweights"),
    ("marked point", "marked_points"),
    ("Λ_", "lambdas"),
    ("rank", "degrees"),
)


def _line_of(text: str, key: object) -> int | None:
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def _validate(data: object, schema_name: str, text: str | None = None) -> None:
    try:
        jsonschema.validate(data, load_schema(schema_name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        key = next((p for p in exc.absolute_path if isinstance(p, str)), None)
        line = _line_of(text, key) if text is not None and key is not None else None
        raise ConfigError(f"{where}: {exc.message}", line) from exc


def _load_json(path: Path) -> tuple[object, str]:
    text = path.read_text()
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc.msg} (column {exc.colno})", exc.lineno) from exc


def parse_scalar(value: object, field: Field) -> Scalar:
    """Read a JSON scalar: an int, a float, a ``"p/q"`` string or a ``[re, im]`` pair."""
    if isinstance(value, list):
        if len(value) != 2:
            raise ConfigError(f"complex values are [re, im] pairs, got {value}")
        re, im = value
        if field == "exact":
            if im != 0:
                raise ConfigError(f"{value} is not rational")
            return parse_scalar(re, field)
        return complex(float(re), float(im))
    if isinstance(value, bool) or not isinstance(value, int | float | str):
        raise ConfigError(f"cannot read {value!r} as a number")
    try:
        exact = Fraction(str(value)) if isinstance(value, float) else Fraction(value)
    except ValueError as exc:
        raise ConfigError(f"cannot read {value!r} as a number") from exc
    return exact if field == "exact" else complex(float(exact))


def scalar_record(value: Scalar) -> ScalarRecord:
    """A scalar as a ``"p/q"`` string or a ``[re, im]`` pair."""
    if isinstance(value, Fraction):
        return str(value)
    return [value.real, value.imag]


def poly_record(p: Poly) -> PolyRecord:
    """Coefficients in increasing degree."""
    return [scalar_record(c) for c in p.coeffs]


def parse_poly(record: Sequence[object], field: Field) -> Poly:
    """Read a polynomial from its coefficient list."""
    return Poly(tuple(parse_scalar(c, field) for c in record), field)


def ratfunc_record(value: RatFunc) -> RatFuncRecord:
    """A rational function with its numerator, denominator and display text."""
    return {"num": poly_record(value.num), "den": poly_record(value.den), "text": str(value)}


def matrix_record(m: RatMatrix) -> list[list[RatFuncRecord]]:
    """A matrix as rows of rational-function records."""
    return [[ratfunc_record(x) for x in row] for row in m.rows]


@dataclass(frozen=True)
class Scenario:
    """A parsed scenario file."""

    record: ScenarioRecord
    cartan: CartanData
    mode: Mode

    def problem(self, mode: Mode | None = None) -> GaudinProblem:
        """The Gaudin problem of the scenario, in its own mode unless ``mode`` is given."""
        field: Field = mode or self.mode
        record = self.record
        cd = self.cartan
        twist = CartanTwist(tuple(parse_scalar(v, field) for v in record["twist"]), field)
        if "lambdas" in record:
            master = MasterData.from_polynomials(
                [parse_poly(lam, field) for lam in record["lambdas"]]
            )
        else:
            points = [parse_scalar(p, field) for p in record["marked_points"]]
            master = master_polynomials(cd, points, record["coweights"], field)
        return GaudinProblem(cd, master, twist, tuple(record["degrees"]))


def parse_scenario(data: object, text: str | None = None) -> Scenario:
    """Validate a scenario record and check it describes a well-formed problem."""
    _validate(data, "scenario", text)
    assert isinstance(data, dict)
    record: ScenarioRecord = data  # type: ignore[assignment]
    group = record["group"]
    mode: Mode = record.get("mode", "exact")
    try:
        cd = cartan_from_label(group) if isinstance(group, str) else cartan_from_matrix(group)
        scenario = Scenario(record, cd, mode)
        scenario.problem()
    except GaudinError as exc:
        message = str(exc)
        key = next((k for fragment, k in _ERROR_KEYS if fragment in message), "group")
        line = _line_of(text, key) if text is not None else None
        raise ConfigError(message, line) from exc
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario file."""
    data, text = _load_json(Path(path))
    logger.debug(f"Loaded scenario from {path}")
    return parse_scenario(data, text)


def solution_from_record(
    scenario: Scenario, record: SolutionRecord, mode: Mode
) -> tuple[QQSolution, BetheConfiguration]:
    """Rebuild the qq-solution and Bethe roots stored in a solutions document."""
    problem = scenario.problem(mode)
    q_plus = tuple(parse_poly(p, mode) for p in record["q_plus"])
    q_minus = tuple(parse_poly(p, mode) for p in record["q_minus"])
    sol = QQSolution(
        problem.cartan, problem.twist, problem.master, q_plus, q_minus, tuple(record["family"])
    )
    cfg = BetheConfiguration.make(
        [[parse_scalar(w, mode) for w in node] for node in record["roots"]]
    )
    return sol, cfg


def write_document(document: AnyDocument, path: str | Path) -> None:
    """Validate a document against its schema and write it as indented JSON."""
    _validate(document, document["format"])
    output_path = Path(path)
    with output_path.open("w") as json_file:
        json.dump(document, json_file, indent=4)
        json_file.write("\n")
    logger.info(f"Wrote {document['format']} document to {output_path}")


def read_document(path: str | Path, expected: str | None = None) -> dict:
    """Read any gaudin-qq document, optionally insisting on its format."""
    data, text = _load_json(Path(path))
    if not isinstance(data, dict) or data.get("format") not in _SCHEMA_FILES:
        raise ConfigError(f"{path} is not a gaudin-qq document", 1)
    if expected is not None and data["format"] != expected:
        raise ConfigError(f"{path} is a {data['format']} document, expected {expected}", _line_of(text, "format"))
    _validate(data, data["format"], text)
    return data


def load_solutions(path: str | Path) -> tuple[Scenario, SolutionsDocument]:
    """Read a solutions document and the scenario stored in it."""
    document = read_document(path, "gaudin-qq/solutions")
    scenario = parse_scenario(document["scenario"])
    return scenario, document  # type: ignore[return-value]
