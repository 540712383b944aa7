"""Exception types shared across the package.

Validation problems subclass ValueError so callers that do not care about
the fine-grained type can catch the builtin. Runtime task failures subclass
RuntimeError.
"""
from __future__ import annotations


class NonFiniteValue(ValueError):
    """A series value is NaN or infinite."""

    def __init__(self, index: int, name: str = ""):
        self.index = index
        self.name = name
        label = f" in series {name!r}" if name else ""
        super().__init__(f"non-finite value at index {index}{label}")


class TooShort(ValueError):
    """A series has fewer than two observations."""


class EmptyManifold(ValueError):
    """(E - 1) * tau >= N leaves no valid embedding vectors."""


class DegenerateOrbit(ValueError):
    """A synthetic-generator iterate left [0, 1]."""


class ManifoldTooSmall(ValueError):
    """A neighbor table needs at least two manifold points."""


class InsufficientNeighbors(ValueError):
    """The library holds fewer than k members besides the query point."""


class LibraryTooLarge(ValueError):
    """Requested library size exceeds the manifold size."""


class ConfigInvalid(ValueError):
    """A sweep configuration violates a constraint; the message names it."""


class InsufficientLValues(ValueError):
    """Convergence needs at least two distinct library sizes per cell."""


class LengthMismatch(ValueError):
    """Paired sequences differ in length."""


class TooFewPoints(ValueError):
    """Correlation needs at least two points."""


class WorkerError(RuntimeError):
    """A sweep task raised; carries the failing task tuple."""

    def __init__(self, task, cause: BaseException):
        self.task = task
        super().__init__(f"task {task} failed: {cause!r}")


class MissingColumn(ValueError):
    """A requested CSV column is absent from the header."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"column {column!r} not found in header")


class RaggedRows(ValueError):
    """A CSV row has a different field count than the header."""


class ParseError(ValueError):
    """A CSV cell failed numeric parsing; row/column are 1-based."""

    def __init__(self, row: int, column: str, cell: str):
        self.row = row
        self.column = column
        self.cell = cell
        super().__init__(f"cannot parse {cell!r} at row {row}, column {column!r}")


class MalformedSkillsFile(ValueError):
    """A skills CSV is empty or structurally invalid."""


class UnknownScenario(ValueError):
    """Benchmark scenario name not recognized."""
