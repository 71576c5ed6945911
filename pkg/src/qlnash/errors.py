"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: validation problems exit 2, blown
enumeration budgets exit 3, and internal invariant violations exit 4.
"""


class SolverError(Exception):
    """Base class for everything raised deliberately by this package."""


class ValidationError(SolverError):
    """Bad input: malformed table, unknown label, violated precondition."""


class UnknownElementError(ValidationError):
    """An element id or label that does not belong to the space."""


class NotQuasiLeontiefError(ValidationError):
    """A function required to be quasi-Leontief is not; carries a witness."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class BudgetExceededError(SolverError):
    """An enumeration would touch more profiles than the configured budget."""


class InvariantViolationError(SolverError):
    """A cross-check that must hold mathematically failed. Always a bug."""
