"""Bäcklund transformations and the Weyl-group orbit of a qq-system solution."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from itertools import groupby

from . import config
from .cartan import (
    CartanData,
    WeylElement,
    identity_element,
    reflect_twist,
    weyl_element,
    weyl_enumerate,
)
from .errors import DegenerateError, GaudinError
from .polyring import RatFunc, Scalar, log_derivative
from .qqcore import QQSolution, assemble_solution, weight_of

logger = logging.getLogger(__name__)


def mu_coefficient(sol: QQSolution, i: int) -> RatFunc:
    """``μ_i = Λ_i⁻¹ (∂log q₋ⁱ - ∂log q₊ⁱ + ⟨α_i, Z⟩)``."""
    q_minus = sol.q_minus[i]
    lam = sol.master.lambdas[i]
    if q_minus.is_zero:
        raise DegenerateError(f"q₋ at node {i + 1} is the zero polynomial")
    if lam.is_zero:
        raise DegenerateError(f"Λ_{i + 1} is the zero polynomial")
    field = sol.field
    log_ratio = log_derivative(q_minus.as_field(field)) - log_derivative(sol.q_plus[i].as_field(field))
    return (log_ratio + sol.pairing(i)) / RatFunc.coerce(lam.as_field(field))


def backlund_step(sol: QQSolution, i: int, *, tol: float = config.LINEAR_TOL) -> QQSolution:
    """Replace q₊ⁱ by monic q₋ⁱ, reflect the twist by s_i and re-solve every q₋."""
    q_minus = sol.q_minus[i]
    if q_minus.is_zero:
        raise DegenerateError(f"q₋ at node {i + 1} is the zero polynomial")
    q_plus = list(sol.q_plus)
    q_plus[i] = q_minus.monic()
    twist = reflect_twist(sol.cartan, i, sol.twist)
    return assemble_solution(sol.cartan, twist, sol.master, q_plus, tol=tol)


@dataclass(frozen=True)
class OrbitEntry:
    """The solution at a Weyl element w, reached from ``s_{i1} w`` by a step at i1.

    ``scale`` is the leading coefficient of the parent's q₋ that monic
    normalization discarded; it is None at the identity.
    """

    element: WeylElement
    solution: QQSolution
    scale: Scalar | None


@dataclass(frozen=True)
class OrbitFailure:
    element: WeylElement
    reason: str


@dataclass
class FullQQSystem:
    """Solutions indexed by Weyl group elements, seeded at the identity."""

    seed: QQSolution
    entries: dict[WeylElement, OrbitEntry] = dataclass_field(default_factory=dict)
    failures: list[OrbitFailure] = dataclass_field(default_factory=list)

    def ordered(self) -> list[OrbitEntry]:
        """Entries by length, then by reduced word."""
        return sorted(self.entries.values(), key=lambda e: (e.element.length, e.element.reduced_word))

    def at(self, word: Sequence[int]) -> OrbitEntry:
        """The entry at the Weyl element with reduced word ``word``."""
        return self.entries[weyl_element(self.seed.cartan, word)]


def _step_entry(parent: OrbitEntry, element: WeylElement) -> OrbitEntry:
    i = element.reduced_word[0]
    scale = parent.solution.q_minus[i].lead
    return OrbitEntry(element, backlund_step(parent.solution, i), scale)


def _run_job(job: tuple[OrbitEntry, WeylElement]) -> OrbitEntry | OrbitFailure:
    parent, element = job
    try:
        return _step_entry(parent, element)
    except GaudinError as exc:
        return OrbitFailure(element, str(exc))


def full_qq_generate(
    sol: QQSolution,
    *,
    cap: int = config.DEFAULT_WEYL_CAP,
    workers: int = config.DEFAULT_WORKERS,
) -> FullQQSystem:
    """Walk the Weyl group by length, stepping each element from its left-descent parent.

    Elements of one length depend only on the previous length, so a layer can
    be computed in parallel. Failed steps are recorded and their descendants
    through that parent are skipped.
    """
    cd = sol.cartan
    elements = weyl_enumerate(cd, cap)
    start = identity_element(cd)
    system = FullQQSystem(sol)
    system.entries[start] = OrbitEntry(start, sol, None)

    for length, layer in groupby(elements[1:], key=lambda w: w.length):
        jobs: list[tuple[OrbitEntry, WeylElement]] = []
        for element in layer:
            parent_element = weyl_element(cd, element.reduced_word[1:])
            parent = system.entries.get(parent_element)
            if parent is None:
                system.failures.append(OrbitFailure(element, f"parent {parent_element.word_string or 'e'} failed"))
                continue
            jobs.append((parent, element))

        if workers > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                outcomes = list(executor.map(_run_job, jobs))
        else:
            outcomes = [_run_job(job) for job in jobs]

        for outcome in outcomes:
            if isinstance(outcome, OrbitFailure):
                logger.warning(f"Bäcklund step to {outcome.element.word_string} failed: {outcome.reason}")
                system.failures.append(outcome)
            else:
                system.entries[outcome.element] = outcome
        logger.debug(f"Orbit layer of length {length}: {len(outcomes)} steps")

    logger.info(
        f"Orbit of W({cd.label}): {len(system.entries)} entries, {len(system.failures)} failures"
    )
    return system


def apply_word(sol: QQSolution, word: Sequence[int]) -> QQSolution:
    """Step along a word right to left, so the result sits at ``s_{w[0]} ··· s_{w[-1]}``."""
    for i in reversed(word):
        sol = backlund_step(sol, i)
    return sol


def braid_consistency(sol: QQSolution, first: Sequence[int], second: Sequence[int]) -> bool:
    """Whether two words for the same Weyl element give the same q₊ and twist."""
    cd = sol.cartan
    if weyl_element(cd, first) != weyl_element(cd, second):
        raise ValueError("the two words are different Weyl group elements")
    a = apply_word(sol, first)
    b = apply_word(sol, second)
    if sol.field == "exact":
        return a.q_plus == b.q_plus and a.twist == b.twist
    return all((x - y).norm() <= config.LINEAR_TOL * max(1.0, x.norm()) for x, y in zip(a.q_plus, b.q_plus, strict=True))


@dataclass(frozen=True)
class DegreeCheck:
    """The coweight read off an orbit entry against the two candidate Weyl actions."""

    element: WeylElement
    weight: tuple[int, ...]
    plain: bool
    dot: bool


def orbit_degree_check(system: FullQQSystem) -> list[DegreeCheck]:
    """Compare the degrees of every orbit entry with the plain and dot actions on the seed weight."""
    seed = system.seed
    cd: CartanData = seed.cartan
    base = weight_of(cd, seed.master, seed.degrees)
    checks = []
    for entry in system.ordered():
        weight = weight_of(cd, seed.master, entry.solution.degrees)
        checks.append(
            DegreeCheck(
                entry.element,
                weight,
                weight == entry.element.act_on_coweight(base),
                weight == entry.element.dot_act_on_coweight(base),
            )
        )
    return checks
