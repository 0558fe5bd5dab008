"""
Magnetic Surface Lab - Error Types

Exception hierarchy shared by every service. Domain errors map to the CLI's
validation exit code; everything else is a runtime failure.
"""

from typing import Any, Optional


class LabError(Exception):
    """Base exception for laboratory operations."""

    def __init__(self, message: str, operation: str = ""):
        """Initialize lab error.

        Args:
            message: Error message
            operation: Name of the operation that failed
        """
        self.message = message
        self.operation = operation
        super().__init__(self.message)

    def __str__(self) -> str:
        """String representation with operation context."""
        if self.operation:
            return f"{self.operation}: {self.message}"
        return self.message


class DomainError(LabError, ValueError):
    """An operation was called outside its precondition."""


class ReductionError(LabError, RuntimeError):
    """Dirichlet reduction did not terminate within the iteration cap."""


class FitError(LabError, ValueError):
    """A least-squares fit had too little usable data."""


class ExactConvergence(LabError):
    """A decay table contains zero errors, so no power law can be fitted."""

    def __init__(self, message: str, table: Optional[Any] = None, operation: str = "decay_fit"):
        """Initialize exact-convergence flag.

        Args:
            message: Error message
            table: The decay table that triggered the flag
            operation: Name of the operation
        """
        super().__init__(message, operation)
        self.table = table
