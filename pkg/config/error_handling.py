"""
Error handling framework for the Bateman-Horn toolkit.

Every error carries the process exit code the CLI reports for it:
0 success, 1 usage or parse problems, 2 inadmissible input, 3 resource budget.
"""

import logging
import time
from enum import Enum
from functools import wraps
from typing import Any, Callable, Dict, Optional


class ErrorType(Enum):
    """Types of errors that can occur in the toolkit."""
    PARSE_ERROR = "parse_error"
    VALIDATION_ERROR = "validation_error"
    CONFIGURATION_ERROR = "configuration_error"
    INADMISSIBLE_ERROR = "inadmissible_error"
    DOMAIN_ERROR = "domain_error"
    CAPACITY_ERROR = "capacity_error"
    COMPUTATION_ERROR = "computation_error"


class ErrorSeverity(Enum):
    """Severity levels for errors."""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


EXIT_CODES = {
    ErrorType.PARSE_ERROR: 1,
    ErrorType.VALIDATION_ERROR: 1,
    ErrorType.CONFIGURATION_ERROR: 1,
    ErrorType.DOMAIN_ERROR: 1,
    ErrorType.COMPUTATION_ERROR: 1,
    ErrorType.INADMISSIBLE_ERROR: 2,
    ErrorType.CAPACITY_ERROR: 3,
}


class BatemanHornError(Exception):
    """Base exception class for toolkit errors."""

    def __init__(
        self,
        message: str,
        error_type: ErrorType = ErrorType.COMPUTATION_ERROR,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM,
        details: Optional[Dict[str, Any]] = None,
        original_exception: Optional[Exception] = None
    ):
        super().__init__(message)
        self.message = message
        self.error_type = error_type
        self.severity = severity
        self.details = details or {}
        self.original_exception = original_exception
        self.timestamp = time.time()

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.error_type]

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary for logging/serialization."""
        return {
            'message': self.message,
            'error_type': self.error_type.value,
            'severity': self.severity.value,
            'details': self.details,
            'exit_code': self.exit_code,
            'timestamp': self.timestamp,
            'original_exception': str(self.original_exception) if self.original_exception else None
        }


class ParseError(BatemanHornError):
    """Malformed polynomial text or flag value."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_type=ErrorType.PARSE_ERROR, **kwargs)


class ValidationError(BatemanHornError):
    """Error related to input validation."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_type=ErrorType.VALIDATION_ERROR, **kwargs)


class ConfigurationError(BatemanHornError):
    """Error related to configuration issues."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_type=ErrorType.CONFIGURATION_ERROR, **kwargs)


class DomainError(BatemanHornError):
    """An argument outside the mathematical domain of an operation."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_type=ErrorType.DOMAIN_ERROR, **kwargs)


class CapacityError(BatemanHornError):
    """A memory budget, scale cap or cutoff would be exceeded."""

    def __init__(self, message: str, **kwargs):
        kwargs.setdefault('severity', ErrorSeverity.HIGH)
        super().__init__(message, error_type=ErrorType.CAPACITY_ERROR, **kwargs)


class GoldenMismatchError(BatemanHornError):
    """Regenerated table rows disagree with the golden values."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_type=ErrorType.COMPUTATION_ERROR, **kwargs)


class InadmissibleFamilyError(BatemanHornError):
    """A hypothesis of the conjecture fails for the given input."""

    hypothesis = "admissibility"

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_type=ErrorType.INADMISSIBLE_ERROR, **kwargs)
        self.details.setdefault('hypothesis', self.hypothesis)


class ReducibleError(InadmissibleFamilyError):
    """A member polynomial factors over the rationals."""

    hypothesis = "irreducibility"

    def __init__(self, message: str, witness: Optional[str] = None, **kwargs):
        super().__init__(message, **kwargs)
        self.witness = witness
        self.details['witness'] = witness


class VanishingPrimeError(InadmissibleFamilyError):
    """The product vanishes identically modulo a prime."""

    hypothesis = "non-vanishing"

    def __init__(self, message: str, prime: Optional[int] = None, **kwargs):
        super().__init__(message, **kwargs)
        self.prime = prime
        self.details['prime'] = prime


class DuplicateMemberError(InadmissibleFamilyError):
    """The same polynomial appears twice in a family."""

    hypothesis = "distinctness"


class PerfectSquareDiscriminantError(InadmissibleFamilyError):
    """A quadratic whose discriminant is a perfect square."""

    hypothesis = "non-square discriminant"


class ParityError(InadmissibleFamilyError):
    """a+b and c are both even, so every value is even."""

    hypothesis = "parity"


class GcdError(InadmissibleFamilyError):
    """Coefficients (or a progression's a and b) share a common factor."""

    hypothesis = "coprimality"


class OddShiftError(InadmissibleFamilyError):
    """An odd shift k leaves at most one prime pair (p, p+k)."""

    hypothesis = "even shift"


class NonResidueError(InadmissibleFamilyError):
    """A prescribed value is a quadratic residue where a nonresidue is required."""

    hypothesis = "quadratic nonresidue"

    def __init__(self, message: str, prime: Optional[int] = None, **kwargs):
        super().__init__(message, **kwargs)
        self.prime = prime
        self.details['prime'] = prime


class ErrorHandler:
    """Centralized error classification, logging and exit-code mapping."""

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)
        self.error_counts: Dict[str, int] = {}

    def handle_error(self, error: Exception, context: str = "") -> int:
        """
        Log an error and return the exit code the process should report.

        Args:
            error: The exception that occurred
            context: Additional context about where the error occurred

        Returns:
            Process exit code
        """
        classified = error if isinstance(error, BatemanHornError) else self.classify_exception(error)

        error_key = f"{type(classified).__name__}:{context}"
        self.error_counts[error_key] = self.error_counts.get(error_key, 0) + 1

        self.logger.error(
            f"Error in {context}: {classified.message}",
            extra={
                'error_type': classified.error_type.value,
                'exit_code': classified.exit_code,
                'context': context,
                'details': classified.details
            }
        )
        return classified.exit_code

    def classify_exception(self, error: Exception) -> BatemanHornError:
        """
        Map a foreign exception into the toolkit hierarchy.

        Args:
            error: The original exception

        Returns:
            Classified toolkit error
        """
        if isinstance(error, BatemanHornError):
            return error
        if isinstance(error, MemoryError):
            return CapacityError(f"Out of memory: {str(error)}", original_exception=error)
        if isinstance(error, (ZeroDivisionError, ArithmeticError)):
            return DomainError(f"Arithmetic failure: {str(error)}", original_exception=error)
        if isinstance(error, (ValueError, TypeError)):
            return ValidationError(f"Invalid input: {str(error)}", original_exception=error)
        return BatemanHornError(
            f"Unexpected error: {str(error)}",
            severity=ErrorSeverity.CRITICAL,
            original_exception=error
        )

    def reset_error_counts(self) -> None:
        """Reset error counters."""
        self.error_counts.clear()

    def handle_graceful_degradation(self, error: Exception, operation: str,
                                    fallback_action: Optional[Callable] = None) -> Any:
        """
        Handle graceful degradation for non-critical operations.

        Args:
            error: The error that occurred
            operation: Description of the operation that failed
            fallback_action: Optional fallback function to execute

        Returns:
            Result of fallback action or None
        """
        self.logger.warning(
            f"Non-critical operation failed: {operation} - {str(error)}",
            extra={'operation': operation, 'error_type': type(error).__name__}
        )

        if fallback_action:
            try:
                return fallback_action()
            except Exception as fallback_error:
                self.logger.warning(
                    f"Fallback action also failed for {operation}: {str(fallback_error)}"
                )

        return None


def with_error_handling(error_handler: Optional[ErrorHandler] = None, context: str = ""):
    """
    Decorator that re-raises foreign exceptions as toolkit errors.

    Args:
        error_handler: ErrorHandler instance to use
        context: Context string for error logging
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            handler = error_handler or ErrorHandler()
            try:
                return func(*args, **kwargs)
            except BatemanHornError:
                raise
            except Exception as e:
                classified = handler.classify_exception(e)
                handler.logger.debug(
                    f"Classified {type(e).__name__} in {context or func.__name__} "
                    f"as {type(classified).__name__}"
                )
                raise classified from e
        return wrapper
    return decorator
