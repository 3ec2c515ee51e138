"""Pkpres - generators, relations and normal forms for direct powers of the positive integers."""
import logging
from typing import Optional, Sequence

__version__ = "0.1-dev"
__author__ = "pkpres developers"

# Coordinates are treated as signed 64-bit machine integers.
COORD_MAX: int = 2**63 - 1

logger = logging.getLogger('pkpres')


# Custom exceptions
class PkpresError(Exception):
    """Base exception for all pkpres errors."""
    pass

class ConfigurationError(PkpresError):
    """Raised when there is an error in configuration."""
    pass

class InvalidTupleError(PkpresError, ValueError):
    """Raised when a coordinate list does not describe an element of P^K."""
    pass

class InvalidWordError(PkpresError, ValueError):
    """Raised when a word would be empty."""
    pass

class CoordinateOverflowError(PkpresError, OverflowError):
    """Raised when arithmetic would push a coordinate past COORD_MAX."""
    pass

class NotAnAtomError(PkpresError):
    """Raised when a tuple is used where an atom is required."""
    pass

class DimensionMismatchError(PkpresError):
    """Raised when operands live in different dimensions."""
    def __init__(self, message: str, left: int, right: int) -> None:
        super().__init__(message)
        self.left = left
        self.right = right

class ParseError(PkpresError):
    """Raised when a tuple or word text form cannot be parsed.

    The position is 1-based; end of input is reported as len(text) + 1.
    """
    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} at offset {position}")
        self.text = text
        self.position = position

class VerificationError(PkpresError):
    """Raised when a live cross-check disagrees with the relation schema."""
    pass

class ResourceLimitError(PkpresError):
    """Raised when a fiber would exceed the enumeration guard."""
    def __init__(self, message: str, target: str, guard: int, size: Optional[int] = None) -> None:
        super().__init__(message)
        self.target = target
        self.guard = guard
        self.size = size


def format_coords(coords: Sequence[int]) -> str:
    """Render coordinates in tuple text form, e.g. ``(2,1)``."""
    return '(' + ','.join(str(c) for c in coords) + ')'
