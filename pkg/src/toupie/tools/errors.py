#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Error types shared by the toupie engine and the command line front end.
"""

from typing import Any, Dict, Optional


class ToupieError(Exception):
    """Base class for all toupie errors."""


class PresentationError(ToupieError, ValueError):
    """Raised when an input presentation or module is invalid."""


class ParseError(PresentationError):
    """Syntax error in one of the text formats, with its position."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class UnsupportedFieldError(PresentationError):
    """Raised when an operation needs an infinite field but got a prime field."""


class WitnessConstraintError(PresentationError):
    """Raised when witness parameters violate the family constraints."""


class CapacityError(ToupieError, RuntimeError):
    """Raised when an input exceeds a configured capacity bound."""


class VerificationError(ToupieError, RuntimeError):
    """Raised when a verification report contains failed checks."""

    def __init__(self, message: str, report: Optional[Dict[str, Any]] = None):
        self.report = report or {}
        super().__init__(message)
