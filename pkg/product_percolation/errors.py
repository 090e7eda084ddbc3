"""Exception hierarchy for product-percolation.

Each error class carries the process exit code the CLI returns for it.
"""


class PercolationLabError(Exception):
    """Base class for all errors raised by the laboratory."""

    exit_code = 1


class ConfigError(PercolationLabError, ValueError):
    """Invalid configuration, unknown key, or invalid graph parameters."""

    exit_code = 2


class InvalidVertexError(PercolationLabError, ValueError):
    """A vertex identifier is malformed or does not belong to the graph."""

    exit_code = 2


class WindowError(PercolationLabError, ValueError):
    """A query falls outside the finite window it is evaluated on."""

    exit_code = 2


class TruncationTooLargeError(PercolationLabError):
    """A breadth-first exploration exceeded its vertex cap."""

    exit_code = 4

    def __init__(self, message: str, cap: int) -> None:
        super().__init__(message)
        self.cap = cap


class DivergentIntegralError(PercolationLabError, ArithmeticError):
    """The requested lattice integral diverges in this dimension."""

    exit_code = 3


class NonConvergenceError(PercolationLabError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

    exit_code = 3


class PopulationCapError(PercolationLabError):
    """A particle population exceeded its cap."""

    exit_code = 4


class ReplayVersionError(PercolationLabError):
    """A summary was produced by a different artifact version."""

    exit_code = 5
