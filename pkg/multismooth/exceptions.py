"""Exceptions raised by multismooth."""
from __future__ import annotations

from typing import Any, Optional


class SmoothnessException(Exception):
    """Base exception."""

    def __init__(self, message: str = "Analysis failed", payload: Optional[Any] = None):
        self.message = message
        self.payload = payload
        super().__init__(self.message)


class InputError(SmoothnessException):
    """Invalid input; the CLI exits with code 2."""


class PropertyViolation(SmoothnessException):
    """An internal cross-check or a stated property does not hold."""


class ParseError(InputError):
    """A payload file could not be read or decoded."""

    def __init__(
        self,
        message: str = "Unreadable payload",
        line: Optional[int] = None,
        field: Optional[str] = None,
    ):
        self.line = line
        self.field = field
        context = []
        if line is not None:
            context.append(f"line {line}")
        if field:
            context.append(f"field {field}")
        if context:
            message = f"{message} ({', '.join(context)})"
        super().__init__(message)


class ValidationError(InputError):
    """A payload decoded but does not describe a valid object."""


class NotSymmetric(ValidationError):
    """A vertex set is not closed under negation."""


class NotFullDimensional(ValidationError):
    """The vertices do not span the whole space."""


class ScopeExceeded(InputError):
    """The request is beyond the documented size bounds."""


class DimensionMismatch(InputError):
    """A vector does not match the dimension of its space."""


class ShapeMismatch(InputError):
    """A matrix does not match its spaces, or two operators differ in shape."""


class MixedModeError(InputError):
    """Exact and floating values were mixed on an exact path."""


class NotUnitVector(InputError):
    """A vector expected on the unit sphere is not."""


class NotUnitNorm(InputError):
    """An operator expected on the unit sphere is not."""


class NotNormalized(NotUnitNorm):
    """The case classification requires a normalized operator."""


class ZeroOperator(InputError):
    """The zero operator has no smoothness order."""


class UnsupportedSpacePair(InputError):
    """The domain/codomain combination is out of scope."""


class WrongSpaces(InputError):
    """The operation is only defined for a specific pair of spaces."""


class NoGap(InputError):
    """The top singular value is not separated from the rest."""


class UnknownTheorem(InputError):
    """No verification suite has this identifier."""


class GenerationExhausted(SmoothnessException):
    """Rejection sampling ran out of budget."""

    def __init__(self, message: str = "Generation budget exhausted", rejections: int = 0):
        self.rejections = rejections
        super().__init__(message, {"rejections": rejections})
