"""Assemble the documents behind the ``solve``, ``verify``, ``orbit`` and ``wronskian`` commands."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import config
from .backlund import FullQQSystem, OrbitEntry, braid_consistency, full_qq_generate, orbit_degree_check
from .bethe import (
    BetheConfiguration,
    GaudinProblem,
    bethe_solve,
    rationalize_configuration,
    residual_max,
    roots_to_qq,
)
from .cartan import CartanData, format_word, identity_element
from .codec import (
    FORMAT_VERSION,
    Scenario,
    matrix_record,
    poly_record,
    ratfunc_record,
    scalar_record,
    solution_from_record,
)
from .errors import (
    CollisionError,
    ConfigError,
    DegenerateError,
    GaudinError,
    InconsistentSystemError,
    SolutionIndexError,
    WeylCapError,
)
from .minors import minor_table
from .oper import backlund_matrix_check, z_twist_check
from .qqcore import QQSolution, check_nondegenerate, residual_norm, solution_residual_norm, weight_of
from .schema import (
    BraidCheck,
    MatrixCheck,
    Mode,
    NodeCheck,
    OrbitDocument,
    OrbitEntryRecord,
    SolutionCheck,
    SolutionRecord,
    SolutionsDocument,
    UnpairedRecord,
    VerifyDocument,
    WronskianDocument,
)
from .wronskian import build_g, matrix_checks, minor_qq_match, verify_wronskian_equation

logger = logging.getLogger(__name__)

# Order of s_i s_j from the product a_ij a_ji.
_BRAID_ORDER = {0: 2, 1: 3, 2: 4, 3: 6}


@dataclass(frozen=True)
class SolveOptions:
    """Knobs of ``gaudin-qq solve``; None falls back to the scenario or the defaults."""

    mode: Mode | None = None
    tol: float | None = None
    seed: int = config.DEFAULT_SEED
    starts: int = config.DEFAULT_STARTS
    workers: int = config.DEFAULT_WORKERS


def scenario_tolerance(scenario: Scenario, tol: float | None) -> float:
    """The tolerance given on the command line, else the scenario's, else the default."""
    if tol is not None:
        return tol
    return scenario.record.get("tolerance", config.RESIDUAL_TOL)


def _within(value: float | None, mode: Mode, tol: float) -> bool:
    if value is None:
        return False
    return value == 0 if mode == "exact" else value <= tol


def _solution_record(problem: GaudinProblem, cfg: BetheConfiguration, sol: QQSolution) -> SolutionRecord:
    mode: Mode = sol.field
    return {
        "roots": [[scalar_record(w) for w in node] for node in cfg.roots],
        "q_plus": [poly_record(q) for q in sol.q_plus],
        "q_minus": [poly_record(q) for q in sol.q_minus],
        "family": list(sol.family),
        "mode": mode,
        "bethe_residual": residual_max(problem.as_field(mode), cfg),
        "qq_residual": [residual_norm(sol, i) for i in range(sol.cartan.rank)],
    }


def solve_scenario(scenario: Scenario, options: SolveOptions | None = None) -> SolutionsDocument:
    """Solve the Bethe equations of a scenario and assemble a qq-solution for each root set.

    In exact mode roots that cannot be recovered as rationals are kept as
    float solutions, so one document may mix both modes.
    """
    options = options or SolveOptions()
    mode = options.mode or scenario.mode
    tol = scenario_tolerance(scenario, options.tol)
    problem = scenario.problem(mode)

    found = bethe_solve(
        problem, starts=options.starts, seed=options.seed, tol=tol, workers=options.workers
    )
    if not found:
        logger.warning(f"No Newton start converged for degrees {problem.degrees}")

    solutions: list[SolutionRecord] = []
    unpaired: list[UnpairedRecord] = []
    for cfg in found:
        chosen = cfg
        if mode == "exact":
            exact = rationalize_configuration(problem, cfg)
            if exact is None:
                logger.warning("Bethe roots are not rational; keeping the float solution")
            else:
                chosen = exact
        try:
            sol = roots_to_qq(problem, chosen, tol=config.LINEAR_TOL)
        except InconsistentSystemError as exc:
            logger.error(f"Bethe roots {chosen.roots} have no qq partner: {exc}")
            unpaired.append({
                "roots": [[scalar_record(w) for w in node] for node in chosen.roots],
                "reason": str(exc),
            })
            continue
        if any(sol.family):
            logger.warning(f"Resonant nodes {[i + 1 for i, f in enumerate(sol.family) if f]}: q₋ is one representative")
        solutions.append(_solution_record(problem, chosen, sol))

    logger.info(f"Found {len(solutions)} solutions for {scenario.cartan.label}")
    return {
        "format": "gaudin-qq/solutions",
        "version": FORMAT_VERSION,
        "scenario": scenario.record,
        "mode": mode,
        "solutions": solutions,
        "unpaired": unpaired,
    }


def record_mode(record: SolutionRecord, index: int, mode: Mode | None) -> Mode:
    """The field a stored solution is read in: its own unless ``mode`` overrides it.

    Exact solutions may be rechecked in floating point, never the other way round.
    """
    if mode is None:
        return record["mode"]
    if mode == "exact" and record["mode"] == "float":
        raise ConfigError(f"solution {index} holds floating-point roots and cannot be read in exact mode")
    return mode


def _check_solution(
    scenario: Scenario, index: int, record: SolutionRecord, tol: float, mode: Mode | None = None
) -> SolutionCheck:
    mode = record_mode(record, index, mode)
    sol, cfg = solution_from_record(scenario, record, mode)
    problem = scenario.problem(mode)
    try:
        bethe: float | None = residual_max(problem, cfg)
    except CollisionError as exc:
        logger.warning(f"Solution {index}: {exc}")
        bethe = None

    nodes: list[NodeCheck] = []
    for i in range(sol.cartan.rank):
        residual = residual_norm(sol, i)
        nodes.append({
            "node": i + 1,
            "qq_residual": residual,
            "resonant": sol.family[i],
            "passed": _within(residual, mode, tol),
        })
    nondegeneracy = check_nondegenerate(sol)
    passed = _within(bethe, mode, tol) and all(n["passed"] for n in nodes) and nondegeneracy["passed"]
    return {
        "index": index,
        "bethe_residual": bethe,
        "nodes": nodes,
        "nondegeneracy": nondegeneracy,
        "passed": passed,
    }


def verify_document(
    scenario: Scenario,
    document: SolutionsDocument,
    tol: float | None = None,
    mode: Mode | None = None,
) -> VerifyDocument:
    """Recompute the qq and Bethe residuals and the nondegeneracy conditions of every solution."""
    tolerance = scenario_tolerance(scenario, tol)
    checks = [
        _check_solution(scenario, index, record, tolerance, mode)
        for index, record in enumerate(document["solutions"])
    ]
    failed = [c["index"] for c in checks if not c["passed"]]
    if failed:
        logger.warning(f"Solutions {failed} failed verification")
    return {
        "format": "gaudin-qq/verify",
        "version": FORMAT_VERSION,
        "tolerance": tolerance,
        "checks": checks,
        "passed": not failed,
    }


def pick_solution(
    scenario: Scenario, document: SolutionsDocument, index: int, mode: Mode | None = None
) -> QQSolution:
    """Rebuild solution ``index`` of a solutions document, optionally in another field."""
    solutions = document["solutions"]
    if not 0 <= index < len(solutions):
        raise SolutionIndexError(index, len(solutions))
    record = solutions[index]
    return solution_from_record(scenario, record, record_mode(record, index, mode))[0]


def braid_words(cd: CartanData) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """The two sides of every braid relation ``s_i s_j s_i ··· = s_j s_i s_j ···``."""
    pairs = []
    for i in range(cd.rank):
        for j in range(i + 1, cd.rank):
            m = _BRAID_ORDER[cd.entry(i, j) * cd.entry(j, i)]
            pairs.append((
                tuple(i if k % 2 == 0 else j for k in range(m)),
                tuple(j if k % 2 == 0 else i for k in range(m)),
            ))
    return pairs


def _entry_record(system: FullQQSystem, entry: OrbitEntry, plain: bool, dot: bool) -> OrbitEntryRecord:
    sol = entry.solution
    return {
        "word": entry.element.word_string,
        "length": entry.element.length,
        "twist": [scalar_record(x) for x in sol.twist.zeta],
        "q_plus": [poly_record(q) for q in sol.q_plus],
        "q_minus": [poly_record(q) for q in sol.q_minus],
        "family": list(sol.family),
        "scale": None if entry.scale is None else scalar_record(entry.scale),
        "qq_residual": solution_residual_norm(sol),
        "weight": list(weight_of(sol.cartan, system.seed.master, sol.degrees)),
        "weight_matches": plain,
        "dot_weight_matches": dot,
    }


def orbit_document(
    scenario: Scenario,
    document: SolutionsDocument,
    *,
    index: int = 0,
    cap: int = config.DEFAULT_WEYL_CAP,
    tol: float | None = None,
    workers: int = config.DEFAULT_WORKERS,
    mode: Mode | None = None,
) -> OrbitDocument:
    """Generate the full qq-system of one solution.

    A Weyl group beyond ``cap`` is not enumerated: the seed is echoed alone
    and the document is marked truncated.
    """
    sol = pick_solution(scenario, document, index, mode)
    cd = sol.cartan
    field: Mode = sol.field
    tolerance = scenario_tolerance(scenario, tol)
    truncated = False
    try:
        system = full_qq_generate(sol, cap=cap, workers=workers)
        weyl_order: int | None = len(system.entries) + len(system.failures)
    except WeylCapError as exc:
        logger.warning(f"{exc}; echoing the seed only")
        start = identity_element(cd)
        system = FullQQSystem(sol, {start: OrbitEntry(start, sol, None)})
        weyl_order = exc.order
        truncated = True

    degree_checks = {check.element: check for check in orbit_degree_check(system)}
    entries = [
        _entry_record(system, entry, degree_checks[entry.element].plain, degree_checks[entry.element].dot)
        for entry in system.ordered()
    ]

    braids: list[BraidCheck] = []
    if not truncated and not system.failures:
        for first, second in braid_words(cd):
            try:
                agreed = braid_consistency(sol, first, second)
            except GaudinError as exc:
                logger.warning(f"Braid check {format_word(first, cd.rank)} failed: {exc}")
                agreed = False
            braids.append({
                "first": format_word(first, cd.rank),
                "second": format_word(second, cd.rank),
                "passed": agreed,
            })

    passed = (
        not system.failures
        and all(_within(e["qq_residual"], field, tolerance) for e in entries)
        and all(b["passed"] for b in braids)
    )
    return {
        "format": "gaudin-qq/orbit",
        "version": FORMAT_VERSION,
        "group": cd.label,
        "solution_index": index,
        "weyl_order": weyl_order,
        "truncated": truncated,
        "entries": entries,
        "failures": [{"word": f.element.word_string, "reason": f.reason} for f in system.failures],
        "braids": braids,
        "passed": passed,
    }


def _oper_checks(sol: QQSolution) -> list[MatrixCheck]:
    checks = [z_twist_check(sol)]
    for i in range(sol.cartan.rank):
        try:
            checks.append(backlund_matrix_check(sol, i))
        except (DegenerateError, InconsistentSystemError) as exc:
            checks.append({"name": f"backlund node {i + 1}", "passed": False, "residual": 0.0, "witness": str(exc)})
    return checks


def wronskian_document(
    scenario: Scenario,
    document: SolutionsDocument,
    *,
    index: int = 0,
    cap: int = config.DEFAULT_WEYL_CAP,
    ascending: bool = True,
    mode: Mode | None = None,
) -> WronskianDocument:
    """Build 𝒢 for one type-A solution and run every check on it.

    Raises NotTypeAError outside type A and TailSolveError when ℬ₋ has no
    rational tail.
    """
    sol = pick_solution(scenario, document, index, mode)
    sol.cartan.require_type_a()
    wd = build_g(sol, ascending=ascending)
    checks = matrix_checks(wd) + _oper_checks(sol)
    relations = verify_wronskian_equation(wd)
    system = full_qq_generate(sol, cap=cap)
    matches = minor_qq_match(wd, system)
    table = minor_table(wd.g, [entry.element for entry in system.ordered()])
    passed = (
        all(c["passed"] for c in checks)
        and all(r["passed"] for r in relations)
        and all(m["passed"] for m in matches)
        and all(row["row_set_agrees"] for row in table)
        and not system.failures
    )
    logger.info(f"G-Wronskian of {sol.cartan.label}: {sum(m['passed'] for m in matches)}/{len(matches)} minors match")
    return {
        "format": "gaudin-qq/wronskian",
        "version": FORMAT_VERSION,
        "group": sol.cartan.label,
        "solution_index": index,
        "b_minus": matrix_record(wd.b_minus),
        "tail_kernels": [
            {"row": k.row + 1, "column": k.column + 1, "direction": ratfunc_record(k.direction)}
            for k in wd.tail_kernels
        ],
        "n_plus": matrix_record(wd.n_plus),
        "g": matrix_record(wd.g),
        "matrix_checks": checks,
        "relations": relations,
        "minor_matches": matches,
        "minor_table": table,
        "passed": passed,
    }
