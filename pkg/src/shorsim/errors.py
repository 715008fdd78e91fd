"""Exception types shared across the package."""

from __future__ import annotations


class ShorSimError(Exception):
    """Base class for shorsim errors."""


class ParseError(ShorSimError):
    """Malformed circuit text.  Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class PreconditionError(ShorSimError):
    """An operation was invoked outside its documented preconditions."""


class UnsupportedLevelError(PreconditionError):
    """The requested compilation level does not exist for these parameters."""


class NonConvergenceError(ShorSimError):
    """Iterative reconstruction hit its iteration cap.

    ``residual`` is the last log-likelihood change observed.
    """

    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class IncompleteDataError(ShorSimError):
    """Tomography records do not cover an informationally complete setting set."""
