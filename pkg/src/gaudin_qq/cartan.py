"""Cartan matrices, twists and Weyl group elements of finite type.

Node indices are 0-based in the API. Reduced words render 1-based (``"121"``)
because that is how they are written in scenario and report files.

The Cartan matrix uses ``a_ij = ⟨α_j, α̌_i⟩``. A twist ``Z = Σ ζ_j α̌_j`` is
stored by its coroot coordinates ζ, and coweights are stored in the basis of
fundamental coweights, where the i-th coordinate is the pairing with ``α_i``.
"""

from __future__ import annotations

import logging
import math
import re
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import TypeAlias

import sympy

from . import config
from .errors import ConfigError, NotTypeAError, WeylCapError
from .polyring import Field, Scalar, to_scalar

logger = logging.getLogger(__name__)

Coweight: TypeAlias = tuple[int, ...]

_LABEL_PATTERN = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")


def _e(size: int, *pairs: tuple[int, Fraction]) -> tuple[Fraction, ...]:
    vector = [Fraction(0)] * size
    for index, value in pairs:
        vector[index] = value
    return tuple(vector)


def _simple_roots(kind: str, rank: int) -> list[tuple[Fraction, ...]]:
    """Simple roots in the standard orthonormal ε-basis (Bourbaki numbering)."""
    one, half = Fraction(1), Fraction(1, 2)

    def chain(size: int, count: int) -> list[tuple[Fraction, ...]]:
        return [_e(size, (i, one), (i + 1, -one)) for i in range(count)]

    match kind:
        case "A":
            return chain(rank + 1, rank)
        case "B":
            return [*chain(rank, rank - 1), _e(rank, (rank - 1, one))]
        case "C":
            return [*chain(rank, rank - 1), _e(rank, (rank - 1, 2 * one))]
        case "D":
            return [*chain(rank, rank - 1), _e(rank, (rank - 2, one), (rank - 1, one))]
        case "E":
            e8 = [
                (half, -half, -half, -half, -half, -half, -half, half),
                _e(8, (0, one), (1, one)),
                *(_e(8, (i, -one), (i + 1, one)) for i in range(6)),
            ]
            return e8[:rank]
        case "F":
            return [
                _e(4, (1, one), (2, -one)),
                _e(4, (2, one), (3, -one)),
                _e(4, (3, one)),
                (half, -half, -half, -half),
            ]
        case "G":
            return [_e(3, (0, one), (1, -one)), (-2 * one, one, one)]
    raise ConfigError(f"unknown Cartan type {kind}{rank}")


def _valid_rank(kind: str, rank: int) -> bool:
    match kind:
        case "A":
            return rank >= 1
        case "B" | "C":
            return rank >= 2
        case "D":
            return rank >= 4
        case "E":
            return rank in {6, 7, 8}
        case "F":
            return rank == 4
        case "G":
            return rank == 2
    return False


@dataclass(frozen=True)
class CartanData:
    """A finite-type Cartan matrix and its type label (``"custom"`` if unrecognised)."""

    label: str
    matrix: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        """Number of simple roots."""
        return len(self.matrix)

    def entry(self, i: int, j: int) -> int:
        """``a_ij = ⟨α_j, α̌_i⟩``."""
        return self.matrix[i][j]

    @property
    def is_type_a(self) -> bool:
        """Whether the matrix is the Cartan matrix of SL(rank + 1)."""
        return self.matrix == cartan_from_label(f"A{self.rank}").matrix

    def require_type_a(self) -> int:
        """Return N for SL(N), refusing other types."""
        if not self.is_type_a:
            raise NotTypeAError(
                f"matrix-level operations need type A, got {self.label}"
            )
        return self.rank + 1

    def neighbors(self, i: int) -> list[int]:
        """Nodes joined to node i in the Dynkin diagram."""
        return [j for j in range(self.rank) if j != i and self.matrix[j][i] != 0]

    def coroot(self, j: int) -> Coweight:
        """``α̌_j`` in fundamental-coweight coordinates: row j of the matrix."""
        return self.matrix[j]


def cartan_from_label(label: str) -> CartanData:
    """Build the Cartan matrix of a type label such as ``"A2"`` or ``"G2"``."""
    match = _LABEL_PATTERN.match(label)
    if match is None:
        raise ConfigError(f"cannot parse Cartan type {label!r}")
    kind, rank = match.group(1).upper(), int(match.group(2))
    if not _valid_rank(kind, rank):
        raise ConfigError(f"no Cartan type {kind}{rank}")

    roots = _simple_roots(kind, rank)

    def inner(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(x, y, strict=True)), Fraction(0))

    matrix = tuple(
        tuple(int(2 * inner(roots[i], roots[j]) / inner(roots[i], roots[i])) for j in range(rank))
        for i in range(rank)
    )
    return CartanData(f"{kind}{rank}", matrix)


def cartan_from_matrix(rows: Sequence[Sequence[int]]) -> CartanData:
    """Validate an explicit Cartan matrix and recognise its type when possible."""
    rank = len(rows)
    if rank == 0 or any(len(row) != rank for row in rows):
        raise ConfigError("a Cartan matrix must be square and nonempty")
    matrix = tuple(tuple(int(a) for a in row) for row in rows)
    for i in range(rank):
        if matrix[i][i] != 2:
            raise ConfigError(f"diagonal entry {i + 1} is {matrix[i][i]}, expected 2")
        for j in range(rank):
            if i != j and (matrix[i][j] > 0 or (matrix[i][j] == 0) != (matrix[j][i] == 0)):
                raise ConfigError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not a Cartan pair")
    sym = sympy.Matrix(matrix)
    for size in range(1, rank + 1):
        if sym[:size, :size].det() <= 0:
            raise ConfigError("the Cartan matrix is not of finite type")

    for kind in "ABCDEFG":
        if _valid_rank(kind, rank):
            known = cartan_from_label(f"{kind}{rank}")
            if known.matrix == matrix:
                return known
    return CartanData("custom", matrix)


def weyl_group_order(cd: CartanData) -> int | None:
    """Closed-form order for labelled types, None for custom matrices."""
    match = _LABEL_PATTERN.match(cd.label)
    if match is None:
        return None
    kind, n = match.group(1), int(match.group(2))
    match kind:
        case "A":
            return math.factorial(n + 1)
        case "B" | "C":
            return 2**n * math.factorial(n)
        case "D":
            return 2 ** (n - 1) * math.factorial(n)
        case "E":
            return {6: 51840, 7: 2903040, 8: 696729600}[n]
        case "F":
            return 1152
        case "G":
            return 12
    return None


@dataclass(frozen=True)
class CartanTwist:
    """The twist ``Z = Σ ζ_j α̌_j`` given by its coroot coordinates."""

    zeta: tuple[Scalar, ...]
    field: Field = "exact"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "zeta", tuple(to_scalar(value, self.field) for value in self.zeta)
        )

    def as_field(self, field: Field) -> CartanTwist:
        """The same twist with coefficients in ``field``."""
        if field == self.field:
            return self
        return CartanTwist(self.zeta, field)


def pairing(cd: CartanData, i: int, twist: CartanTwist) -> Scalar:
    """``⟨α_i, Z⟩ = Σ_j a_ji ζ_j``."""
    if not 0 <= i < cd.rank:
        raise IndexError(f"node {i} out of range for rank {cd.rank}")
    if len(twist.zeta) != cd.rank:
        raise ConfigError(f"twist has {len(twist.zeta)} entries, expected {cd.rank}")
    return sum(
        (cd.entry(j, i) * twist.zeta[j] for j in range(cd.rank)),
        Fraction(0) if twist.field == "exact" else 0j,
    )


def is_resonant(cd: CartanData, i: int, twist: CartanTwist) -> bool:
    """Whether ``⟨α_i, Z⟩`` vanishes."""
    value = pairing(cd, i, twist)
    if twist.field == "exact":
        return value == 0
    return abs(value) <= config.RESONANCE_TOL


def is_regular(cd: CartanData, twist: CartanTwist) -> bool:
    """Whether no simple root pairs to zero with the twist."""
    return not any(is_resonant(cd, i, twist) for i in range(cd.rank))


def reflect_twist(cd: CartanData, i: int, twist: CartanTwist) -> CartanTwist:
    """``s_i(Z) = Z - ⟨α_i, Z⟩ α̌_i``."""
    shift = pairing(cd, i, twist)
    zeta = list(twist.zeta)
    zeta[i] -= shift
    return CartanTwist(tuple(zeta), twist.field)


def reflect_coweight(cd: CartanData, i: int, coweight: Coweight) -> Coweight:
    """``s_i(λ̌) = λ̌ - ⟨α_i, λ̌⟩ α̌_i`` in fundamental-coweight coordinates."""
    c = coweight[i]
    return tuple(x - c * a for x, a in zip(coweight, cd.coroot(i), strict=True))


def _canonical_word(cd: CartanData, key: Coweight) -> tuple[int, ...]:
    word = []
    current = key
    while True:
        descent = next((i for i, x in enumerate(current) if x < 0), None)
        if descent is None:
            return tuple(word)
        word.append(descent)
        current = reflect_coweight(cd, descent, current)


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element, identified by its image of ρ̌.

    ``reduced_word`` is canonical: at each step the smallest left descent is
    peeled off. The element equals ``s_{w[0]} s_{w[1]} ··· s_{w[-1]}``.
    """

    cartan: CartanData
    key: Coweight
    reduced_word: tuple[int, ...] = dataclass_field(compare=False)

    @property
    def length(self) -> int:
        """Length of a reduced word."""
        return len(self.reduced_word)

    @property
    def is_identity(self) -> bool:
        """Whether this is the identity of W."""
        return not self.reduced_word

    @property
    def word_string(self) -> str:
        """The reduced word written with 1-based node labels."""
        return format_word(self.reduced_word, self.cartan.rank)

    def inverse(self) -> WeylElement:
        """The inverse element, from the reversed word."""
        return weyl_element(self.cartan, tuple(reversed(self.reduced_word)))

    def __mul__(self, other: WeylElement) -> WeylElement:
        return weyl_element(self.cartan, self.reduced_word + other.reduced_word)

    def act_on_coweight(self, coweight: Coweight) -> Coweight:
        """Apply the element to a coweight, rightmost reflection first."""
        for i in reversed(self.reduced_word):
            coweight = reflect_coweight(self.cartan, i, coweight)
        return coweight

    def dot_act_on_coweight(self, coweight: Coweight) -> Coweight:
        """``w·λ̌ = w(λ̌ + ρ̌) - ρ̌``."""
        shifted = self.act_on_coweight(tuple(x + 1 for x in coweight))
        return tuple(x - 1 for x in shifted)

    def act_on_twist(self, twist: CartanTwist) -> CartanTwist:
        """Apply the element to a twist, rightmost reflection first."""
        for i in reversed(self.reduced_word):
            twist = reflect_twist(self.cartan, i, twist)
        return twist

    def permutation(self) -> tuple[int, ...]:
        """Type A only: ``perm[k]`` is the index of ``w(ε_k)``."""
        n = self.cartan.require_type_a()
        images = []
        for k in range(n):
            x = k
            for i in reversed(self.reduced_word):
                if x == i:
                    x = i + 1
                elif x == i + 1:
                    x = i
            images.append(x)
        return tuple(images)


def weyl_element(cd: CartanData, word: Sequence[int]) -> WeylElement:
    """The element ``s_{word[0]} ··· s_{word[-1]}``, with its canonical reduced word."""
    for i in word:
        if not 0 <= i < cd.rank:
            raise IndexError(f"node {i} out of range for rank {cd.rank}")
    key: Coweight = (1,) * cd.rank
    for i in reversed(word):
        key = reflect_coweight(cd, i, key)
    return WeylElement(cd, key, _canonical_word(cd, key))


def simple_reflection(cd: CartanData, i: int) -> WeylElement:
    """The generator s_i."""
    return weyl_element(cd, (i,))


def identity_element(cd: CartanData) -> WeylElement:
    """The identity of W."""
    return weyl_element(cd, ())


def format_word(word: Sequence[int], rank: int) -> str:
    """Render a word with 1-based labels, comma separated from rank 10 on."""
    if rank < 10:
        return "".join(str(i + 1) for i in word)
    return ",".join(str(i + 1) for i in word)


def parse_word(cd: CartanData, text: str) -> tuple[int, ...]:
    """Parse ``"121"`` or ``"1,2,1"`` (1-based) into node indices."""
    text = text.strip()
    if not text:
        return ()
    pieces = text.split(",") if "," in text or cd.rank >= 10 else list(text)
    try:
        word = tuple(int(piece) - 1 for piece in pieces)
    except ValueError as exc:
        raise ConfigError(f"cannot parse reduced word {text!r}") from exc
    if any(not 0 <= i < cd.rank for i in word):
        raise ConfigError(f"reduced word {text!r} uses a node outside 1..{cd.rank}")
    return word


def weyl_enumerate(cd: CartanData, cap: int = config.DEFAULT_WEYL_CAP) -> list[WeylElement]:
    """All Weyl group elements, identity first, in breadth-first (length) order."""
    order = weyl_group_order(cd)
    if order is not None and order > cap:
        raise WeylCapError(order, cap)

    start = identity_element(cd)
    seen = {start.key}
    elements = [start]
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for j in range(cd.rank):
            candidate = weyl_element(cd, (*current.reduced_word, j))
            if candidate.key in seen:
                continue
            seen.add(candidate.key)
            elements.append(candidate)
            queue.append(candidate)
            if len(elements) > cap:
                raise WeylCapError(order, cap)

    logger.debug(f"Enumerated {len(elements)} elements of W({cd.label})")
    return elements
