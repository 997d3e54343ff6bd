"""Exception hierarchy shared by the library, services and CLI."""

from typing import Any


class EnnError(Exception):
    """Base class for enn-argon errors."""


class ContractViolation(EnnError, ValueError):
    """A pre-condition, shape or configuration invariant was violated."""


class NonFiniteError(EnnError, FloatingPointError):
    """NaN or Inf appeared during minimization or integration."""

    def __init__(self, message: str, iteration: int | None = None):
        super().__init__(message)
        self.iteration = iteration


class PropertySuiteFailure(EnnError):
    """A property suite exceeded its threshold."""

    def __init__(self, message: str, report: dict[str, Any] | None = None):
        super().__init__(message)
        self.report = report or {}


class StorageError(EnnError, OSError):
    """A dataset, checkpoint or CSV path could not be read or written."""

    def __init__(self, message: str, path: Any = None):
        super().__init__(f"{message}: {path}" if path is not None else message)
        self.path = path
