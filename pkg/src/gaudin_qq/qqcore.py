"""The twisted Gaudin qq-system and its polynomial solutions.

For each node i the qq-system reads

    q₊ⁱ ∂q₋ⁱ - q₋ⁱ ∂q₊ⁱ + ⟨α_i, Z⟩ q₊ⁱ q₋ⁱ = Λ_i Π_{j≠i} (q₊ʲ)^(-a_ji)

and is linear in q₋ⁱ once the q₊ are fixed.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from . import config
from .cartan import CartanData, CartanTwist, Coweight, is_resonant, pairing
from .errors import ConfigError, DegenerateError, InconsistentSystemError
from .polyring import (
    Field,
    Poly,
    PolyEquation,
    PolyUnknown,
    Scalar,
    SolveStatus,
    join_fields,
    poly_linear_solve,
    to_scalar,
    wronskian2,
)
from .schema import NondegeneracyReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MasterData:
    """The master polynomials Λ_i, optionally with the marked points behind them.

    When ``points`` is empty the Λ_i were given directly.
    """

    points: tuple[Scalar, ...]
    coweights: tuple[Coweight, ...]
    lambdas: tuple[Poly, ...]

    @classmethod
    def from_polynomials(cls, lambdas: Sequence[Poly]) -> MasterData:
        """Master data given directly by its polynomials, with no marked points."""
        for i, lam in enumerate(lambdas):
            if lam.is_zero:
                raise DegenerateError(f"Λ_{i + 1} is the zero polynomial")
        return cls((), (), tuple(lambdas))

    @property
    def field(self) -> Field:
        """Float if any Λ_i is."""
        return join_fields(*(lam.field for lam in self.lambdas))

    @property
    def rank(self) -> int:
        """Number of nodes."""
        return len(self.lambdas)

    def as_field(self, field: Field) -> MasterData:
        """The same data with coefficients in ``field``."""
        if field == self.field:
            return self
        points = tuple(to_scalar(p, field) for p in self.points)
        return MasterData(points, self.coweights, tuple(lam.as_field(field) for lam in self.lambdas))

    def log_derivative_at(self, i: int, w: Scalar) -> Scalar:
        """``∂ log Λ_i`` at w; raises ZeroDivisionError at a marked point."""
        if self.points:
            return sum(
                (c[i] / (w - z) for z, c in zip(self.points, self.coweights, strict=True) if c[i]),
                0 * w,
            )
        lam = self.lambdas[i]
        return lam.derivative()(w) / lam(w)


def master_polynomials(
    cd: CartanData,
    points: Sequence[object],
    coweights: Sequence[Sequence[int]],
    field: Field = "exact",
) -> MasterData:
    """``Λ_i = Π_j (z - z_j)^{⟨α_i, λ̌_j⟩}`` for dominant coweights λ̌_j."""
    if len(points) != len(coweights):
        raise ConfigError(f"{len(points)} marked points but {len(coweights)} coweights")
    scalars = tuple(to_scalar(p, field) for p in points)
    for a in range(len(scalars)):
        for b in range(a):
            if scalars[a] == scalars[b]:
                raise ConfigError(f"marked points {b + 1} and {a + 1} coincide")
    weights: list[Coweight] = []
    for j, coweight in enumerate(coweights):
        if len(coweight) != cd.rank:
            raise ConfigError(f"coweight {j + 1} has {len(coweight)} entries, expected {cd.rank}")
        if any(int(m) != m or m < 0 for m in coweight):
            raise ConfigError(f"coweight {j + 1} is not dominant integral")
        weights.append(tuple(int(m) for m in coweight))

    lambdas = []
    for i in range(cd.rank):
        roots = [z for z, c in zip(scalars, weights, strict=True) for _ in range(c[i])]
        lambdas.append(Poly.from_roots(roots, field))
    return MasterData(scalars, tuple(weights), tuple(lambdas))


def weight_of(cd: CartanData, master: MasterData, degrees: Sequence[int]) -> Coweight:
    """``Λ̌ = Σ_j λ̌_j - Σ_i d_i α̌_i`` in fundamental-coweight coordinates."""
    total = [lam.degree for lam in master.lambdas]
    for j, d in enumerate(degrees):
        for i, a in enumerate(cd.coroot(j)):
            total[i] -= d * a
    return tuple(total)


def qq_rhs(cd: CartanData, master: MasterData, q_plus: Sequence[Poly], i: int) -> Poly:
    """``Λ_i Π_{j≠i} (q₊ʲ)^(-a_ji)``."""
    rhs = master.lambdas[i]
    for j in cd.neighbors(i):
        rhs *= q_plus[j] ** (-cd.entry(j, i))
    return rhs


def expected_q_minus_degree(
    cd: CartanData,
    twist: CartanTwist,
    master: MasterData,
    degrees: Sequence[int],
    i: int,
) -> int:
    """Degree bound for q₋ⁱ; negative means no polynomial solution exists.

    A resonant node gains one degree because the Wronskian term alone has to
    produce the right-hand side.
    """
    bound = master.lambdas[i].degree - degrees[i]
    for j in cd.neighbors(i):
        bound += -cd.entry(j, i) * degrees[j]
    if is_resonant(cd, i, twist):
        return max(bound + 1, degrees[i])
    return bound


@dataclass(frozen=True)
class QMinusSolution:
    """Outcome of solving one node for q₋.

    For a resonant node ``direction`` is the monic homogeneous solution (q₊ⁱ)
    and ``q_minus`` is the representative whose coefficient at ``z^deg q₊ⁱ``
    vanishes. ``witness`` is the least-squares residual when inconsistent.
    """

    status: SolveStatus
    q_minus: Poly | None
    direction: Poly | None
    witness: float


def solve_q_minus(
    cd: CartanData,
    twist: CartanTwist,
    master: MasterData,
    q_plus: Sequence[Poly],
    i: int,
    *,
    tol: float = config.LINEAR_TOL,
) -> QMinusSolution:
    """Solve the node-i qq equation for q₋ⁱ given all q₊."""
    field = join_fields(master.field, twist.field, *(q.field for q in q_plus))
    qi = q_plus[i].as_field(field)
    if qi.is_zero:
        raise DegenerateError(f"q₊ at node {i + 1} is the zero polynomial")
    degrees = [q.degree for q in q_plus]
    bound = expected_q_minus_degree(cd, twist.as_field(field), master, degrees, i)
    rhs = qq_rhs(cd, master, q_plus, i).as_field(field)
    if bound < 0:
        logger.debug(f"Node {i + 1}: degree bound {bound} is negative")
        witness = float(rhs.norm())
        return QMinusSolution("inconsistent", None, None, witness)

    a = to_scalar(pairing(cd, i, twist), field)
    equation = PolyEquation({"q": (qi * a - qi.derivative(), qi)}, rhs)
    result = poly_linear_solve([PolyUnknown("q", bound)], [equation], field, tol=tol)

    match result.status:
        case "inconsistent":
            return QMinusSolution("inconsistent", None, None, result.residual)
        case "unique":
            return QMinusSolution("unique", result.particular["q"], None, 0.0)
    direction = result.kernel[0]["q"].monic()
    particular = result.particular["q"]
    representative = particular - direction.scale(particular.coefficient(direction.degree))
    logger.debug(f"Node {i + 1} is resonant: q₋ is defined up to multiples of {direction}")
    return QMinusSolution("family", representative, direction, result.residual)


@dataclass(frozen=True)
class QQSolution:
    """A polynomial solution of the qq-system.

    ``family[i]`` marks resonant nodes where q₋ⁱ is one representative of an
    affine family.
    """

    cartan: CartanData
    twist: CartanTwist
    master: MasterData
    q_plus: tuple[Poly, ...]
    q_minus: tuple[Poly, ...]
    family: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        rank = self.cartan.rank
        if not (len(self.q_plus) == len(self.q_minus) == self.master.rank == rank):
            raise ConfigError(f"solution data does not match rank {rank}")
        if not self.family:
            object.__setattr__(self, "family", (False,) * rank)
        for i, q in enumerate(self.q_plus):
            if q.is_zero:
                raise DegenerateError(f"q₊ at node {i + 1} is the zero polynomial")
            if abs(q.lead - 1) > config.RESONANCE_TOL:
                raise DegenerateError(f"q₊ at node {i + 1} is not monic")

    @property
    def field(self) -> Field:
        """Float if the twist, the master data or any polynomial is."""
        return join_fields(
            self.twist.field, self.master.field, *(q.field for q in self.q_plus + self.q_minus)
        )

    @property
    def degrees(self) -> tuple[int, ...]:
        """Degrees of the q₊."""
        return tuple(q.degree for q in self.q_plus)

    def pairing(self, i: int) -> Scalar:
        """``⟨α_i, Z⟩`` for the solution's twist."""
        return pairing(self.cartan, i, self.twist)


def qq_residual(sol: QQSolution, i: int) -> Poly:
    """Left side minus right side of the node-i qq equation."""
    qp, qm = sol.q_plus[i], sol.q_minus[i]
    return wronskian2(qp, qm) + qp * qm * sol.pairing(i) - qq_rhs(sol.cartan, sol.master, sol.q_plus, i)


def residual_norm(sol: QQSolution, i: int) -> float:
    """Zero when the node-i equation holds; relative to the right side in float mode."""
    residual = qq_residual(sol, i)
    if residual.field == "exact":
        return float(residual.norm())
    rhs = qq_rhs(sol.cartan, sol.master, sol.q_plus, i)
    return residual.norm() / max(1.0, rhs.norm())


def solution_residual_norm(sol: QQSolution) -> float:
    """Largest qq residual over all nodes."""
    return max((residual_norm(sol, i) for i in range(sol.cartan.rank)), default=0.0)


def assemble_solution(
    cd: CartanData,
    twist: CartanTwist,
    master: MasterData,
    q_plus: Sequence[Poly],
    *,
    tol: float = config.LINEAR_TOL,
) -> QQSolution:
    """Solve every node for q₋; raises InconsistentSystemError on failure."""
    q_minus = []
    family = []
    for i in range(cd.rank):
        solved = solve_q_minus(cd, twist, master, q_plus, i, tol=tol)
        if solved.q_minus is None:
            raise InconsistentSystemError(i, solved.witness)
        q_minus.append(solved.q_minus)
        family.append(solved.status == "family")
    return QQSolution(cd, twist, master, tuple(q_plus), tuple(q_minus), tuple(family))


def check_nondegenerate(sol: QQSolution) -> NondegeneracyReport:
    """Check the four nondegeneracy conditions node by node."""
    cd = sol.cartan
    rank = cd.rank
    violations: list[str] = []

    squarefree = [q.is_squarefree() for q in sol.q_plus]
    for i, ok in enumerate(squarefree):
        if not ok:
            violations.append(f"q₊ at node {i + 1} has a repeated root")

    avoids = []
    for i in range(rank):
        clashes = [
            k for k in range(rank)
            if cd.entry(i, k) != 0 and sol.q_plus[i].shares_root_with(sol.master.lambdas[k])
        ]
        avoids.append(not clashes)
        violations.extend(
            f"q₊ at node {i + 1} vanishes at a zero of Λ_{k + 1}" for k in clashes
        )

    distinct = [True] * rank
    for i in range(rank):
        for j in range(i + 1, rank):
            linked = any(cd.entry(i, k) != 0 and cd.entry(j, k) != 0 for k in range(rank))
            if linked and sol.q_plus[i].shares_root_with(sol.q_plus[j]):
                distinct[i] = distinct[j] = False
                violations.append(f"q₊ at nodes {i + 1} and {j + 1} share a root")

    coprime = []
    for i in range(rank):
        if sol.q_minus[i].is_zero:
            ok = sol.q_plus[i].degree == 0
        else:
            ok = not sol.q_plus[i].shares_root_with(sol.q_minus[i])
        coprime.append(ok)
        if not ok:
            violations.append(f"q₊ and q₋ at node {i + 1} are not coprime")

    return {
        "squarefree": squarefree,
        "avoids_marked_points": avoids,
        "distinct_from_neighbors": distinct,
        "coprime": coprime,
        "violations": violations,
        "passed": not violations,
    }
