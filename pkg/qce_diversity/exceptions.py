"""
Exception hierarchy for QCE Diversity
"""
from typing import Optional


class QceError(Exception):
    """Base class for all errors raised by the package"""


class ConfigError(QceError, ValueError):
    """Invalid experiment or system configuration"""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.field = field
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        location = []
        if self.line is not None:
            location.append(f"line {self.line}")
        if self.field is not None:
            location.append(f"field '{self.field}'")
        if location:
            return f"{', '.join(location)}: {self.message}"
        return self.message


class ZeroInputError(QceError, ValueError):
    """Phase of a (numerically) zero complex value is undefined"""


class ZeroChannelEntryError(QceError, ValueError):
    """A channel coefficient is zero, so the matched filter has no phase to follow"""


class InvalidSigmaError(QceError, ValueError):
    """Noise variance must be positive and finite"""


class InvalidArgumentError(QceError, ValueError):
    """Argument outside the documented domain of an operation"""


class DomainError(QceError, ValueError):
    """Bound or formula used outside the (L, M) regime where it holds"""


class DegenerateDistributionError(QceError):
    """Requested density does not exist (point mass)"""


class InsufficientDataError(QceError):
    """Not enough usable points for a fit or floor decision"""
