#!/usr/bin/env python3
"""Exceptions raised by the blockage engine.

Each class derives from the built-in exception a caller would catch anyway,
so ``except ValueError`` still works for code that does not know about them.
"""
from typing import Optional


class RangeError(OverflowError):
    """An intermediate value left the representable floating point range."""


class BranchCutError(ValueError):
    """A multivalued function was asked for a value on its branch cut."""


class TruncationError(RuntimeError):
    """A series did not meet its tolerance within the allowed number of terms."""

    def __init__(self, message: str, terms: Optional[int] = None):
        super().__init__(message)
        self.terms = terms


class QuadratureError(RuntimeError):
    """
    Numerical integration failed to reach its tolerance.

    Attributes:
        panels: Number of panels used before giving up.
        residual: Last error estimate.
        dimension: Which integration variable failed (e.g. "omega", "y", "x").
    """

    def __init__(self, message: str, panels: int = 0, residual: float = float("nan"),
                 dimension: Optional[str] = None):
        detail = f"{message} (panels={panels}, residual={residual:.3e}"
        if dimension:
            detail += f", dimension={dimension}"
        super().__init__(detail + ")")
        self.panels = panels
        self.residual = residual
        self.dimension = dimension


class InversionError(QuadratureError):
    """The characteristic function did not decay before the frequency limit."""


class InsufficientSamplesError(ValueError):
    """A Monte Carlo estimator was given too few samples to be meaningful."""


class ConfigError(ValueError):
    """Invalid run configuration. ``key`` names the offending entry when known."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key
