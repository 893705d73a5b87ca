"""Shared typed schemas for scenarios, solution files and verification reports."""

from typing import Literal, TypeAlias

from typing_extensions import NotRequired, TypedDict

Mode: TypeAlias = Literal["exact", "float"]
DocumentFormat: TypeAlias = Literal[
    "gaudin-qq/solutions", "gaudin-qq/verify", "gaudin-qq/orbit", "gaudin-qq/wronskian"
]
# Exact scalars are "p/q" strings, float scalars are [re, im] pairs.
ScalarRecord: TypeAlias = str | list[float]
PolyRecord: TypeAlias = list[ScalarRecord]
RelationName: TypeAlias = Literal["top", "bottom", "vector"]


class CliContext(TypedDict):
    """Options shared by every subcommand through ``click.Context.obj``."""

    verbose: bool


class RatFuncRecord(TypedDict, closed=True):
    """A rational function as numerator and monic denominator coefficients."""

    num: PolyRecord
    den: PolyRecord
    text: str


class ScenarioRecord(TypedDict):
    """Input describing a Gaudin model and the Bethe degrees to solve for."""

    group: str | list[list[int]]
    marked_points: list[ScalarRecord | int | float]
    coweights: list[list[int]]
    twist: list[ScalarRecord | int | float]
    degrees: list[int]
    mode: NotRequired[Mode]
    tolerance: NotRequired[float]
    lambdas: NotRequired[list[PolyRecord]]


class SolutionRecord(TypedDict, closed=True):
    """One Bethe configuration together with its qq-system solution."""

    roots: list[list[ScalarRecord]]
    q_plus: list[PolyRecord]
    q_minus: list[PolyRecord]
    family: list[bool]
    mode: Mode
    bethe_residual: float | None
    qq_residual: list[float]


class UnpairedRecord(TypedDict, closed=True):
    """Bethe roots that solve the equations but have no polynomial qq partner."""

    roots: list[list[ScalarRecord]]
    reason: str


class SolutionsDocument(TypedDict, closed=True):
    """Output of ``gaudin-qq solve``."""

    format: Literal["gaudin-qq/solutions"]
    version: int
    scenario: ScenarioRecord
    mode: Mode
    solutions: list[SolutionRecord]
    unpaired: list[UnpairedRecord]


class NondegeneracyReport(TypedDict, closed=True):
    """Per-node outcome of the four nondegeneracy conditions."""

    squarefree: list[bool]
    avoids_marked_points: list[bool]
    distinct_from_neighbors: list[bool]
    coprime: list[bool]
    violations: list[str]
    passed: bool


class NodeCheck(TypedDict, closed=True):
    """Residual of one qq equation."""

    node: int
    qq_residual: float
    resonant: bool
    passed: bool


class SolutionCheck(TypedDict, closed=True):
    """Verification outcome for one solution of a solutions document."""

    index: int
    bethe_residual: float | None
    nodes: list[NodeCheck]
    nondegeneracy: NondegeneracyReport
    passed: bool


class VerifyDocument(TypedDict, closed=True):
    """Output of ``gaudin-qq verify``."""

    format: Literal["gaudin-qq/verify"]
    version: int
    tolerance: float
    checks: list[SolutionCheck]
    passed: bool


class OrbitEntryRecord(TypedDict, closed=True):
    """The qq-solution attached to one Weyl group element."""

    word: str
    length: int
    twist: list[ScalarRecord]
    q_plus: list[PolyRecord]
    q_minus: list[PolyRecord]
    family: list[bool]
    scale: ScalarRecord | None
    qq_residual: float
    weight: list[int]
    weight_matches: bool
    dot_weight_matches: bool


class OrbitFailureRecord(TypedDict, closed=True):
    """A Weyl group element whose Bäcklund step could not be taken."""

    word: str
    reason: str


class BraidCheck(TypedDict, closed=True):
    """Comparison of two reduced words for the same Weyl group element."""

    first: str
    second: str
    passed: bool


class OrbitDocument(TypedDict, closed=True):
    """Output of ``gaudin-qq orbit``."""

    format: Literal["gaudin-qq/orbit"]
    version: int
    group: str
    solution_index: int
    weyl_order: int | None
    truncated: bool
    entries: list[OrbitEntryRecord]
    failures: list[OrbitFailureRecord]
    braids: list[BraidCheck]
    passed: bool


class RelationCheck(TypedDict, closed=True):
    """One of the differential relations satisfied by minors of G."""

    node: int
    relation: RelationName
    residual: float
    passed: bool


class MinorMatch(TypedDict, closed=True):
    """Whether a generalized minor of G is proportional to an orbit q₊."""

    word: str
    node: int
    minor: str
    q_plus: str
    constant: ScalarRecord | None
    passed: bool


class MinorTableEntry(TypedDict, closed=True):
    """``Δ_{uω_i, vω_i}(G)`` with its row/column-set cross-check."""

    u: str
    v: str
    node: int
    minor: str
    row_set_agrees: bool


class MatrixCheck(TypedDict, closed=True):
    """A matrix identity checked entrywise; ``witness`` names a failing entry."""

    name: str
    passed: bool
    residual: float
    witness: NotRequired[str]


class TailKernelRecord(TypedDict, closed=True):
    """A free direction of ℬ₋ at a resonant entry; row and column are 1-based."""

    row: int
    column: int
    direction: RatFuncRecord


class WronskianDocument(TypedDict, closed=True):
    """Output of ``gaudin-qq wronskian``."""

    format: Literal["gaudin-qq/wronskian"]
    version: int
    group: str
    solution_index: int
    b_minus: list[list[RatFuncRecord]]
    tail_kernels: list[TailKernelRecord]
    n_plus: list[list[RatFuncRecord]]
    g: list[list[RatFuncRecord]]
    matrix_checks: list[MatrixCheck]
    relations: list[RelationCheck]
    minor_matches: list[MinorMatch]
    minor_table: list[MinorTableEntry]
    passed: bool


AnyDocument: TypeAlias = SolutionsDocument | VerifyDocument | OrbitDocument | WronskianDocument


class ReportSection(TypedDict, closed=True):
    """One document flattened into a pass/fail table for the HTML and Markdown reports."""

    title: str
    source: str
    passed: bool
    columns: list[str]
    rows: list[list[str]]
