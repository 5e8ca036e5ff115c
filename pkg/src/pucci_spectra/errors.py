"""Exception hierarchy shared by all modules."""


class PucciSpectraError(Exception):
    """Base class for all package errors."""


class InputError(PucciSpectraError):
    """Invalid numerical input (non-finite, asymmetric, out of range)."""


class GridError(PucciSpectraError):
    """Grid construction failed (too coarse, empty domain, stencil mismatch)."""


class DomainError(PucciSpectraError):
    """Domain does not satisfy a geometric precondition (e.g. not symmetric)."""


class SolverError(PucciSpectraError):
    """Iterative solver failed to converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NoSolutionError(SolverError):
    """No solution bracket found; existence is not guaranteed."""


class EigenError(PucciSpectraError):
    """Eigenvalue search failed (bracket expansion or stalled iteration)."""


class ConfigError(PucciSpectraError):
    """Bad run configuration; message lists every offending key."""
