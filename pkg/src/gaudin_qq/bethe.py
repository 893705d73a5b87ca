"""Bethe ansatz equations for the twisted Gaudin model and a multistart Newton solver."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.stats import qmc

from . import config
from .cartan import CartanData, CartanTwist, Coweight, pairing
from .errors import CollisionError, ConfigError
from .polyring import Field, Poly, Scalar, join_fields, rationalize, to_scalar
from .qqcore import MasterData, QQSolution, assemble_solution, weight_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaudinProblem:
    """A Gaudin model together with the number of Bethe roots per node."""

    cartan: CartanData
    master: MasterData
    twist: CartanTwist
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        rank = self.cartan.rank
        if len(self.degrees) != rank or self.master.rank != rank or len(self.twist.zeta) != rank:
            raise ConfigError(f"problem data does not match rank {rank}")
        if any(d < 0 for d in self.degrees):
            raise ConfigError("Bethe root counts must be nonnegative")

    @property
    def field(self) -> Field:
        """Float if the master data or the twist is."""
        return join_fields(self.master.field, self.twist.field)

    @property
    def weight(self) -> Coweight:
        """The weight determined by the master data and the root counts."""
        return weight_of(self.cartan, self.master, self.degrees)

    def as_field(self, field: Field) -> GaudinProblem:
        """The same problem with coefficients in ``field``."""
        return GaudinProblem(
            self.cartan, self.master.as_field(field), self.twist.as_field(field), self.degrees
        )


@dataclass(frozen=True)
class BetheConfiguration:
    """Bethe roots grouped by node, each node's roots in sorted order."""

    roots: tuple[tuple[Scalar, ...], ...]

    @classmethod
    def make(cls, roots: Sequence[Sequence[Scalar]]) -> BetheConfiguration:
        """Build a configuration with each node's roots sorted."""
        return cls(tuple(tuple(sorted(node, key=_root_order)) for node in roots))

    @property
    def field(self) -> Field:
        """Float as soon as one root is complex."""
        if any(isinstance(w, complex) for node in self.roots for w in node):
            return "float"
        return "exact"

    def flat(self) -> list[Scalar]:
        """All roots, node after node."""
        return [w for node in self.roots for w in node]

    def index(self) -> list[tuple[int, int]]:
        """``(node, position)`` for every root, in residual order."""
        return [(i, ell) for i, node in enumerate(self.roots) for ell in range(len(node))]


def _root_order(w: Scalar) -> tuple[float, float]:
    c = complex(w)
    return (round(c.real, 9), round(c.imag, 9))


def _check_shape(problem: GaudinProblem, cfg: BetheConfiguration) -> None:
    counts = tuple(len(node) for node in cfg.roots)
    if counts != problem.degrees:
        raise ConfigError(f"configuration has {counts} roots per node, expected {problem.degrees}")


def bethe_residual(problem: GaudinProblem, cfg: BetheConfiguration) -> list[Scalar]:
    """The left-hand sides of the Bethe equations, ordered by (node, root).

    ``F_iℓ = ⟨α_i, Z⟩ + Σ_j m_ij/(w - z_j) - Σ_{(j,s)≠(i,ℓ)} a_ji/(w - w_s^j)``
    """
    _check_shape(problem, cfg)
    cd = problem.cartan
    residual: list[Scalar] = []
    for i, ell in cfg.index():
        w = cfg.roots[i][ell]
        try:
            value = pairing(cd, i, problem.twist) + problem.master.log_derivative_at(i, w)
        except ZeroDivisionError as exc:
            raise CollisionError(f"root {ell + 1} of node {i + 1} sits on a marked point") from exc
        for j, node in enumerate(cfg.roots):
            a = cd.entry(j, i)
            if a == 0:
                continue
            for s, other in enumerate(node):
                if (j, s) == (i, ell):
                    continue
                if other == w:
                    raise CollisionError(
                        f"roots ({i + 1},{ell + 1}) and ({j + 1},{s + 1}) coincide"
                    )
                value -= a / (w - other)
        residual.append(value)
    return residual


def residual_max(problem: GaudinProblem, cfg: BetheConfiguration) -> float:
    """Largest Bethe residual in absolute value."""
    return max((abs(complex(v)) for v in bethe_residual(problem, cfg)), default=0.0)


def bethe_jacobian(problem: GaudinProblem, cfg: BetheConfiguration) -> np.ndarray:
    """Complex Jacobian of ``bethe_residual`` with respect to the flattened roots."""
    _check_shape(problem, cfg)
    cd = problem.cartan
    index = cfg.index()
    position = {key: k for k, key in enumerate(index)}
    jacobian = np.zeros((len(index), len(index)), dtype=complex)
    for row, (i, ell) in enumerate(index):
        w = complex(cfg.roots[i][ell])
        if problem.master.points:
            for z, c in zip(problem.master.points, problem.master.coweights, strict=True):
                if c[i]:
                    jacobian[row, row] -= c[i] / (w - complex(z)) ** 2
        else:
            lam = problem.master.lambdas[i].as_field("float")
            d1, d2, v = lam.derivative()(w), lam.derivative(2)(w), lam(w)
            jacobian[row, row] += d2 / v - (d1 / v) ** 2
        for j, node in enumerate(cfg.roots):
            a = cd.entry(j, i)
            if a == 0:
                continue
            for s, other in enumerate(node):
                if (j, s) == (i, ell):
                    continue
                term = a / (w - complex(other)) ** 2
                jacobian[row, row] += term
                jacobian[row, position[j, s]] -= term
    return jacobian


def _separated(problem: GaudinProblem, flat: np.ndarray, index: list[tuple[int, int]]) -> bool:
    guard = config.DENOMINATOR_GUARD
    for k, (i, _) in enumerate(index):
        w = flat[k]
        if not math.isfinite(w.real) or not math.isfinite(w.imag):
            return False
        for z, c in zip(problem.master.points, problem.master.coweights, strict=True):
            if c[i] and abs(w - complex(z)) <= guard:
                return False
        for m in range(k):
            j = index[m][0]
            if problem.cartan.entry(j, i) != 0 and abs(w - flat[m]) <= guard:
                return False
    return True


def _singular_points(problem: GaudinProblem) -> list[complex]:
    """Marked points, or the zeros of the Λ_i when those were given directly."""
    if problem.master.points:
        return [complex(z) for z in problem.master.points]
    return [
        complex(r)
        for lam in problem.master.lambdas
        for r in lam.as_field("float").roots().roots
    ]


def escape_radius(problem: GaudinProblem) -> float:
    """Bethe roots farther than this from the origin are treated as escaped to infinity.

    The scale adds the spread of the marked points to the distance
    ``charge / |⟨α_i, Z⟩|`` at which the twist balances the pole terms.
    """
    points = _singular_points(problem)
    charge = sum(lam.degree for lam in problem.master.lambdas) + 2 * sum(problem.degrees)
    pairings = [abs(complex(pairing(problem.cartan, i, problem.twist))) for i in range(problem.cartan.rank)]
    regular = [p for p in pairings if p > config.RESONANCE_TOL]
    balance = charge / min(regular) if regular else float(charge)
    return config.ESCAPE_FACTOR * (1 + max((abs(z) for z in points), default=0.0) + balance)


def scaled_residual(f: np.ndarray, x: np.ndarray) -> float:
    """``max |F_k| · max(1, |w_k|)``, which stays away from zero as roots run off to infinity."""
    if not len(f):
        return 0.0
    return float(np.max(np.abs(f) * np.maximum(1.0, np.abs(x))))


def _split(problem: GaudinProblem, flat: np.ndarray) -> list[np.ndarray]:
    offsets = np.cumsum([0, *problem.degrees])
    return [flat[offsets[i] : offsets[i + 1]] for i in range(len(problem.degrees))]


def _offset_from(problem: GaudinProblem, x: np.ndarray, known: np.ndarray) -> np.ndarray:
    """``x - known`` after matching the roots of each node to the nearest known roots."""
    parts = []
    for xs, rs in zip(_split(problem, x), _split(problem, known), strict=True):
        if not len(xs):
            continue
        _, columns = linear_sum_assignment(np.abs(xs[:, None] - rs[None, :]) ** 2)
        parts.append(xs - rs[columns])
    return np.concatenate(parts)


def _deflation_factor(problem: GaudinProblem, x: np.ndarray, step: np.ndarray, known: Sequence[np.ndarray]) -> float:
    """Scale turning a Newton step into a step for ``M·F`` with ``M = Π (|x - r|⁻² + σ)``.

    Sherman-Morrison gives ``τ = 1 / (1 - ∇log M · step)``; the gradient is
    taken in real coordinates.
    """
    slope = 0.0
    for root in known:
        offset = _offset_from(problem, x, root)
        distance2 = float(np.vdot(offset, offset).real)
        if distance2 == 0.0:
            return 1.0
        inverse = 1.0 / distance2
        gradient = -2.0 * inverse**2 / (inverse + config.DEFLATION_SHIFT)
        slope += gradient * float(np.vdot(offset, step).real)
    return 1.0 / (1.0 - slope) if slope != 1.0 else 1.0


def _newton(
    problem: GaudinProblem,
    start: np.ndarray,
    tol: float,
    known: Sequence[np.ndarray] = (),
) -> BetheConfiguration | None:
    """Newton iteration deflated away from ``known``; None when it escapes or stalls.

    Steps are capped in length and halved only to keep every Bethe
    denominator away from zero. Convergence is judged on ``scaled_residual``.
    """
    index = [(i, ell) for i, d in enumerate(problem.degrees) for ell in range(d)]
    radius = escape_radius(problem)
    x = start.copy()
    for iteration in range(config.NEWTON_MAX_ITERATIONS):
        try:
            cfg = BetheConfiguration(_unflatten(problem, x))
            f = np.array(bethe_residual(problem, cfg), dtype=complex)
        except CollisionError:
            return None
        if scaled_residual(f, x) <= tol:
            logger.debug(f"Newton converged after {iteration} steps")
            return BetheConfiguration.make(cfg.roots)
        jacobian = bethe_jacobian(problem, cfg)
        try:
            step = np.linalg.solve(jacobian, -f)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jacobian, -f, rcond=None)[0]
        if known:
            step = step * _deflation_factor(problem, x, step, known)
        length = float(np.linalg.norm(step))
        cap = config.NEWTON_STEP_CAP * (1 + float(np.linalg.norm(x)))
        if length > cap:
            step = step * (cap / length)
        damping = 1.0
        while not _separated(problem, x + damping * step, index):
            damping /= 2
            if damping < config.NEWTON_MIN_DAMPING:
                return None
        x = x + damping * step
        if float(np.max(np.abs(x))) > radius:
            return None
    return None


def _unflatten(problem: GaudinProblem, flat: Sequence[complex]) -> tuple[tuple[complex, ...], ...]:
    roots = []
    offset = 0
    for d in problem.degrees:
        roots.append(tuple(complex(w) for w in flat[offset : offset + d]))
        offset += d
    return tuple(roots)


def _start_points(problem: GaudinProblem, starts: int, seed: int) -> list[np.ndarray]:
    """Scrambled Halton points in a disk around the marked points.

    The disk is centred at the mean of the marked points with radius
    ``2·(1 + spread)``; radii are uniform rather than area-uniform, so the
    starts crowd the marked points.
    """
    count = sum(problem.degrees)
    points = _singular_points(problem)
    center = complex(np.mean(points)) if points else 0j
    radius = 2 * (1 + max((abs(z - center) for z in points), default=0.0))
    sampler = qmc.Halton(d=2 * count, scramble=True, seed=seed)
    samples = sampler.random(starts)
    result = []
    for row in samples:
        r = radius * row[0::2]
        theta = 2 * np.pi * row[1::2]
        result.append((center + r * np.exp(1j * theta)).astype(complex))
    return result


def _same_configuration(a: BetheConfiguration, b: BetheConfiguration) -> bool:
    """Equal up to ``DEDUP_TOL`` after pairing the roots of each node optimally."""
    for node_a, node_b in zip(a.roots, b.roots, strict=True):
        if not node_a:
            continue
        xs = np.array([complex(x) for x in node_a])
        ys = np.array([complex(y) for y in node_b])
        cost = np.abs(xs[:, None] - ys[None, :])
        rows, columns = linear_sum_assignment(cost)
        if cost[rows, columns].max() > config.DEDUP_TOL:
            return False
    return True


def _run_starts(
    problem: GaudinProblem,
    starting: list[np.ndarray],
    tol: float,
    known: list[np.ndarray],
    workers: int,
) -> list[BetheConfiguration | None]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda x0: _newton(problem, x0, tol, known), starting))
    return [_newton(problem, x0, tol, known) for x0 in starting]


def bethe_solve(
    problem: GaudinProblem,
    *,
    starts: int = config.DEFAULT_STARTS,
    seed: int = config.DEFAULT_SEED,
    tol: float = config.RESIDUAL_TOL,
    workers: int = config.DEFAULT_WORKERS,
) -> list[BetheConfiguration]:
    """Find distinct Bethe configurations by Newton from quasi-random starts.

    After the first sweep the starts are rerun with the solutions found so far
    deflated, until a sweep finds nothing new or ``DEFLATION_ROUNDS`` is used
    up. The result is deterministic for a fixed seed regardless of
    ``workers``. Every returned configuration has scaled residual at most
    ``tol``.
    """
    numeric = problem.as_field("float")
    if sum(numeric.degrees) == 0:
        return [BetheConfiguration(tuple(() for _ in numeric.degrees))]

    starting = _start_points(numeric, starts, seed)
    found: list[BetheConfiguration] = []
    for sweep in range(1 + config.DEFLATION_ROUNDS):
        known = [np.array(cfg.flat(), dtype=complex) for cfg in found]
        outcomes = _run_starts(numeric, starting, tol, known, workers)
        added = 0
        for outcome in outcomes:
            if outcome is None:
                continue
            if not any(_same_configuration(outcome, seen) for seen in found):
                found.append(outcome)
                added += 1
        logger.debug(
            f"Sweep {sweep}: {sum(o is not None for o in outcomes)} of {len(outcomes)} starts"
            f" converged, {added} new configurations"
        )
        if not added:
            break

    found.sort(key=lambda cfg: [_root_order(w) for w in cfg.flat()])
    logger.info(f"Newton found {len(found)} distinct configurations from {len(starting)} starts")
    return found


def rationalize_configuration(
    problem: GaudinProblem,
    cfg: BetheConfiguration,
    max_denominator: int = config.MAX_RATIONAL_DENOMINATOR,
) -> BetheConfiguration | None:
    """Snap numerical roots to rationals, keeping them only if they solve exactly."""
    exact = problem.as_field("exact")
    roots = []
    for node in cfg.roots:
        snapped = [rationalize(to_scalar(w, "float"), max_denominator) for w in node]
        if any(w is None for w in snapped):
            return None
        roots.append([w for w in snapped if isinstance(w, Fraction)])
    candidate = BetheConfiguration.make(roots)
    try:
        if any(v != 0 for v in bethe_residual(exact, candidate)):
            return None
    except CollisionError:
        return None
    return candidate


def roots_to_qq(
    problem: GaudinProblem,
    cfg: BetheConfiguration,
    *,
    tol: float = config.LINEAR_TOL,
) -> QQSolution:
    """Build q₊ from the roots and solve for every q₋."""
    _check_shape(problem, cfg)
    field = join_fields(problem.field, cfg.field)
    q_plus = tuple(Poly.from_roots(node, field) for node in cfg.roots)
    return assemble_solution(
        problem.cartan, problem.twist.as_field(field), problem.master.as_field(field), q_plus, tol=tol
    )


def qq_to_roots(sol: QQSolution) -> BetheConfiguration:
    """Roots of every q₊; exact roots need q₊ to split over the rationals."""
    roots = []
    for i, q in enumerate(sol.q_plus):
        found = q.roots()
        if found.cofactor.degree > 0:
            found = q.as_field("float").roots()
            logger.debug(f"q₊ at node {i + 1} does not split over Q, using float roots")
        roots.append(found.roots)
    return BetheConfiguration.make(roots)
