"""
Exception hierarchy.

Every error carries the ``module.operation`` that raised it so the CLI can name
the failing step. ``ConfigError`` subclasses map to exit code 2 and
``NumericalError`` subclasses to exit code 3.
"""

from typing import Optional


class DyadpotError(Exception):
    """Base class for all dyadpot errors"""

    def __init__(self, message: str, operation: Optional[str] = None):
        super().__init__(message)
        self.operation = operation or "dyadpot"

    def describe(self) -> str:
        return f"{self.operation}: {self}"


class ConfigError(DyadpotError):
    """Invalid input: configuration, geometry or data layout"""


class NumericalError(DyadpotError):
    """A solve or eigenproblem failed"""


class ShapeSpecError(ConfigError):
    pass


class RootNotInside(ConfigError):
    pass


class OverlappingComponents(ConfigError):
    pass


class WindowEmpty(ConfigError):
    pass


class WindowViolation(ConfigError):
    pass


class WindowTouchesBoundary(ConfigError):
    pass


class MeshMismatch(ConfigError):
    pass


class MultiLoopUnsupported(ConfigError):
    pass


class DegeneratePanel(ConfigError):
    pass


class TargetOnPanel(ConfigError):
    pass


class GaugeViolation(ConfigError):
    pass


class ProbeTooClose(ConfigError):
    pass


class NonFinite(NumericalError):
    pass


class SingularV(NumericalError):
    pass


class SingularForm(NumericalError):
    pass


class SingularMass(NumericalError):
    pass


class NotContractive(NumericalError):
    pass
