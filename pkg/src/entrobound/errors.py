"""Exception types shared across the package.

Input problems derive from ValueError so they map naturally onto the
CLI's exit code 1; solver and internal-consistency problems derive from
RuntimeError and map onto exit code 2.
"""


class InvalidDistributionError(ValueError):
    """A probability vector has negative entries or does not sum to one."""


class InvalidStateError(ValueError):
    """A density matrix is not Hermitian, unit trace, positive semidefinite."""


class DimensionMismatchError(ValueError):
    """Operator dimensions are incompatible."""


class DegenerateCaseError(ValueError):
    """The requested analytic expression is undefined for these parameters."""


class SolverFailureError(RuntimeError):
    """No start of the multistart ascent converged.

    Carries the best objective value and iterate seen so far in
    ``best_value`` and ``best_point``.
    """

    def __init__(self, message, best_value=None, best_point=None):
        super().__init__(message)
        self.best_value = best_value
        self.best_point = best_point


class NormConsistencyError(RuntimeError):
    """A numeric norm disagrees with a certified closed form or bound."""


class ConjectureViolationError(RuntimeError):
    """A numerically evaluated norm exceeds the conjectured closed form."""
