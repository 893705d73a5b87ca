"""Exceptions raised by the qq-system library."""


class GaudinError(ValueError):
    """Base class for every refusal raised by this package."""


class ConfigError(GaudinError):
    """A scenario or solution file is malformed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DegenerateError(GaudinError):
    """A nondegeneracy precondition failed (zero pivot, zero polynomial, ...)."""


class WeylCapError(GaudinError):
    """The Weyl group is larger than the enumeration cap."""

    def __init__(self, order: int | None, cap: int) -> None:
        self.order = order
        self.cap = cap
        size = f"of order {order}" if order is not None else "with more elements"
        super().__init__(f"Weyl group {size} exceeds the cap of {cap}")


class InconsistentSystemError(GaudinError):
    """The linear system for q₋ has no polynomial solution."""

    def __init__(self, node: int, witness: float) -> None:
        self.node = node
        self.witness = witness
        super().__init__(
            f"no polynomial q₋ at node {node + 1} (least-squares residual {witness:.3e})"
        )


class TailSolveError(GaudinError):
    """An entry of ℬ₋ below the first subdiagonal has no rational solution."""

    def __init__(self, row: int, column: int) -> None:
        self.row = row
        self.column = column
        self.level = row - column
        super().__init__(
            f"no rational solution for ℬ₋ entry ({row + 1}, {column + 1})"
            f" at subdiagonal level {self.level}"
        )


class NotTypeAError(GaudinError):
    """A matrix-level operation was requested outside type A."""


class CollisionError(GaudinError):
    """Two Bethe roots coincide, or a root hits a marked point."""


class SolutionIndexError(GaudinError):
    """A command asked for a solution the solutions file does not hold."""

    def __init__(self, index: int, count: int) -> None:
        self.index = index
        self.count = count
        super().__init__(f"solution index {index} out of range: the file holds {count} solutions")
