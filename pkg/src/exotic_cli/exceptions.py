"""
Custom exceptions.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from typing_extensions import TypedDict


class ErrorLevel(str, Enum):
    """
    Levels of errors that can be reported by the library.
    """

    INFO = "info"
    WARNING = "warning"
    ERROR = "error"


class ErrorPayload(TypedDict, total=False):
    """
    A structured error payload.
    """

    message: str
    error_type: str
    level: ErrorLevel
    extra: Dict[str, Any]


class ExoticError(Exception):
    """
    Base exception carrying structured error payloads.
    """

    error_type = "EXOTIC_ERROR"

    def __init__(
        self,
        message: str,
        extra: Optional[Dict[str, Any]] = None,
        errors: Optional[List[ErrorPayload]] = None,
    ):
        super().__init__(message)
        self.errors: List[ErrorPayload] = errors or [
            {
                "message": message,
                "error_type": self.error_type,
                "level": ErrorLevel.ERROR,
                "extra": extra or {},
            },
        ]


class DomainError(ExoticError):
    """
    Exception raised when an argument is outside the supported range.
    """

    error_type = "DOMAIN_ERROR"


class ReductionError(ExoticError):
    """
    Exception raised when the gravity reduction is inconsistent.

    This means a gravity monomial was eliminated by the relations, which can
    only happen if the inadmissibility predicate is wrong.
    """

    error_type = "REDUCTION_ERROR"


class PrecisionError(ExoticError):
    """
    Exception raised when a numeric precision cannot be achieved.
    """

    error_type = "PRECISION_ERROR"


class AmbiguousFitError(ExoticError):
    """
    Exception raised when more than one MZV combination fits a number.
    """

    error_type = "AMBIGUOUS_FIT_ERROR"


class RelationTableError(ExoticError):
    """
    Exception raised when the MZV relation table is invalid.
    """

    error_type = "RELATION_TABLE_ERROR"


class BudgetError(ExoticError):
    """
    Exception raised when an integration does not converge within its budget.
    """

    error_type = "BUDGET_ERROR"

    def __init__(self, message: str, best_estimate: float, error_estimate: float):
        super().__init__(
            message,
            extra={"best_estimate": best_estimate, "error_estimate": error_estimate},
        )
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class CLIError(Exception):
    """
    Exception raised for errors that occur during the CLI execution that should
    stop the execution with an exit code.
    """

    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code
