"""
Exception hierarchy for Ordode.

Checker failures and non-convergence are reported, not raised. The classes
below cover the cases where an operation cannot produce a meaningful result.
"""

from typing import Optional, Sequence


class OrdodeError(Exception):
    """Base class for all Ordode errors."""


class AnchorError(OrdodeError, ValueError):
    """An anchor operation is outside the supported algebra."""


class ProblemDefinitionError(OrdodeError, ValueError):
    """Problem data are inconsistent (e.g. x_star not below the enclosure ceiling)."""


class TailNotSummableError(OrdodeError, ArithmeticError):
    """A tail anchor has no finite seminorm contribution at some index."""

    def __init__(self, index: int, detail: str = ""):
        self.index = index
        message = f"tail not summable at index {index}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class OrderUndecidableError(OrdodeError, ValueError):
    """Two tails cannot be compared by rule and no sample refutes the order."""

    def __init__(self, detail: str = ""):
        message = "order undecidable beyond prefix"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class EmptySupremumError(OrdodeError, ValueError):
    def __init__(self):
        super().__init__("sup of empty set undefined")


class NoUpperBoundError(OrdodeError, ValueError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"no upper bound (input #{position} is not below the bound)")


class FieldEvaluationError(OrdodeError, ValueError):
    """Field evaluation failed; carries the grid node and coordinate."""

    def __init__(self, message: str, node: Optional[int] = None, coordinate: Optional[int] = None):
        self.reason = message
        self.node = node
        self.coordinate = coordinate
        location = []
        if node is not None:
            location.append(f"node {node}")
        if coordinate is not None:
            location.append(f"coordinate {coordinate}")
        if location:
            message = f"{message} at {', '.join(location)}"
        super().__init__(message)


class MonotonicityViolationError(OrdodeError, ArithmeticError):
    def __init__(self, iteration: int, node: int, coordinate: int, drop: float):
        self.iteration = iteration
        self.node = node
        self.coordinate = coordinate
        self.drop = drop
        super().__init__(
            "monotonicity violated during iteration "
            f"{iteration}: coordinate {coordinate} at node {node} decreased by {drop:.3e}"
        )


class HypothesisFailedError(OrdodeError):
    """Raised by the solver when a hypothesis check fails without override."""

    def __init__(self, reports: Sequence):
        self.reports = list(reports)
        failed = ", ".join(r.name for r in self.reports if not r.ok)
        super().__init__(f"hypothesis checks failed: {failed}")


class GridMismatchError(OrdodeError, ValueError):
    def __init__(self, detail: str = ""):
        message = "grid mismatch"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class NotASolutionError(OrdodeError, ValueError):
    def __init__(self, position: int, residual: float, tol: float):
        self.position = position
        self.residual = residual
        super().__init__(
            f"input #{position} is not a solution: residual {residual:.3e} exceeds {tol:.3e}"
        )


class EnclosureViolationError(OrdodeError, ValueError):
    """A supremum input leaves the enclosure x_hat + T|C| at some node."""

    def __init__(self, position: int, node: int, t: float):
        self.position = position
        self.node = node
        super().__init__(
            f"input #{position} leaves the enclosure x_hat + T|C| at node {node} (t = {t:g})"
        )


class TrajectoryFileError(OrdodeError, ValueError):
    """A trajectory CSV is malformed."""

    def __init__(self, path: str, detail: str):
        self.path = path
        super().__init__(f"{path}: {detail}")


class ProblemFileError(OrdodeError, ValueError):
    """Problem file could not be parsed or failed schema validation."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        path: str = "",
    ):
        self.line = line
        self.column = column
        self.path = path
        prefix = ""
        if line is not None:
            prefix = f"line {line}, column {column}: "
        if path:
            prefix = f"{prefix}{path}: "
        super().__init__(prefix + message)
