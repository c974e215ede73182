from typing import Dict, List, Any, Optional
from dataclasses import dataclass, field
from datetime import datetime
from enum import IntEnum
import traceback
import logging


class ExitCode(IntEnum):
    SUCCESS = 0
    INVALID_INPUT = 2
    RESOURCE_STOP = 3
    UNDECIDED = 4


@dataclass
class ErrorContext:
    """Context information for an error."""
    component: str
    operation: str
    timestamp: datetime
    details: Dict[str, Any]
    traceback: str


class Grid2xError(Exception):
    """Base exception for grid extension computations."""
    exit_code = ExitCode.INVALID_INPUT


class DimensionMismatchError(Grid2xError):
    """Raised when objects of different grid dimensions are combined."""
    pass


class UnsupportedDimensionError(Grid2xError):
    """Raised for a dimension outside the configured range."""
    pass


class InvalidRealizationError(Grid2xError):
    """Raised when an (H, L, X) triple does not describe a realization."""
    pass


class InvalidSubgroupError(InvalidRealizationError):
    """L is not an index-2 subgroup of the origin stabilizer, or m lies in L."""
    pass


class InvalidGeneratorError(InvalidRealizationError):
    """An element of X is not in H or does not move the origin to a neighbor."""
    pass


class QuotientNotGridError(InvalidRealizationError):
    """The connections do not cover every grid direction."""
    pass


class NoConnectionError(Grid2xError):
    """A connection pattern without edges was classified."""
    pass


class MisuseError(Grid2xError):
    """An operation was called outside its precondition."""
    pass


class CatalogParseError(Grid2xError):
    """Malformed catalog text."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownStageError(CatalogParseError):
    pass


class StaleInputError(Grid2xError):
    """Catalog header digest does not match the active configuration."""
    pass


class ConfigurationError(Grid2xError):
    pass


class ResourceBudgetExceeded(Grid2xError):
    """A stage ran out of its budget; partial state was checkpointed."""
    exit_code = ExitCode.RESOURCE_STOP

    def __init__(self, message: str, checkpoint: Optional[str] = None):
        super().__init__(message)
        self.checkpoint = checkpoint


class NeedsLargerRadius(Grid2xError):
    """A ball is too small to contain the period box of an extension."""

    def __init__(self, radius: int, required: Optional[int] = None):
        super().__init__(f"ball of radius {radius} does not contain the period box")
        self.radius = radius
        self.required = required


class ErrorHandler:
    """Maps errors to exit codes and keeps an error history."""

    def __init__(self, max_history: int = 1000):
        self.logger = logging.getLogger(__name__)
        self.max_history = max_history
        self.error_history: List[Dict[str, Any]] = []

    def handle_error(self, error: Exception, component: str, operation: str,
                     details: Optional[Dict[str, Any]] = None) -> ExitCode:
        """Record an error and return the exit code the CLI should use."""
        context = ErrorContext(
            component=component,
            operation=operation,
            timestamp=datetime.now(),
            details=details or {},
            traceback=traceback.format_exc()
        )
        code = self.exit_code_for(error)
        self._update_error_history(error, context, code)
        if code == ExitCode.RESOURCE_STOP:
            self.logger.warning(f"{component}.{operation} stopped: {error}")
        else:
            self.logger.error(f"{component}.{operation} failed: {error}")
        return code

    @staticmethod
    def exit_code_for(error: Exception) -> ExitCode:
        if isinstance(error, Grid2xError):
            return error.exit_code
        if isinstance(error, (ValueError, FileNotFoundError)):
            return ExitCode.INVALID_INPUT
        return ExitCode.RESOURCE_STOP

    def _update_error_history(self, error: Exception, context: ErrorContext, code: ExitCode):
        self.error_history.append({
            "error_type": error.__class__.__name__,
            "message": str(error),
            "component": context.component,
            "operation": context.operation,
            "timestamp": context.timestamp.isoformat(),
            "exit_code": int(code),
            "details": context.details,
            "traceback": context.traceback
        })
        if len(self.error_history) > self.max_history:
            self.error_history = self.error_history[-self.max_history:]

    def get_error_history(self, limit: int = 100) -> List[Dict[str, Any]]:
        return self.error_history[-limit:]

    def get_component_errors(self, component: str) -> List[Dict[str, Any]]:
        return [
            error for error in self.error_history
            if error["component"] == component
        ]
