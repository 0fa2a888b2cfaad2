#!/usr/bin/env python3
"""
Error hierarchy for the two-photocurrent simulator.
Simple exception classes carrying a context dict for debugging and for the CLI's
machine-readable error output.
"""

from typing import Any, Dict, Optional


class TwoPhotocurrentError(Exception):
    """Base exception for simulator operations."""

    exit_code = 2

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.context = context or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": str(self),
            "context": self.context,
        }


class InvalidArgumentError(TwoPhotocurrentError, ValueError):
    """Argument outside the documented domain of an operation."""

    exit_code = 1


class ConfigValidationError(TwoPhotocurrentError):
    """Experiment config rejected before any compute."""

    exit_code = 1

    def __init__(
        self, message: str, field_path: str = "", context: Optional[Dict[str, Any]] = None
    ):
        super().__init__(message, context)
        self.field_path = field_path

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["field_path"] = self.field_path
        return payload


class ResourceLimitError(TwoPhotocurrentError):
    """Fock-space dimension above the configured limit."""
    pass


class TruncationError(TwoPhotocurrentError):
    """Truncation deficit too large to sample from."""
    pass


class EquivalenceFailure(TwoPhotocurrentError):
    """Two schemes judged statistically different."""

    exit_code = 3
