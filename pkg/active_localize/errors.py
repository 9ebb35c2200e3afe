"""Exception types raised by active-localize."""

from __future__ import annotations


class LocalizeError(Exception):
    """Base class for all library errors."""


class DegenerateGeometryError(LocalizeError, ValueError):
    """Sensor and target coincide, so the bearing is undefined."""


class UnboundedUncertaintyError(LocalizeError, ValueError):
    """Fisher information is singular; the uncertainty ellipse is unbounded."""


class NumericalDegeneracyError(LocalizeError, ArithmeticError):
    """A histogram update left no finite cell."""


class PlacementError(LocalizeError, RuntimeError):
    """Initial robot/target placement could not be sampled."""


class TrainingDivergedError(LocalizeError, RuntimeError):
    """A training loss became non-finite."""


class CheckpointError(LocalizeError, ValueError):
    """A checkpoint file is unreadable or incompatible."""


class ConfigError(LocalizeError, ValueError):
    """Invalid run configuration.

    ``line`` and ``column`` are 1-based and set for syntax errors;
    ``key`` is the dotted key path for unknown or mistyped keys.
    """

    def __init__(
        self,
        message: str,
        *,
        line: int | None = None,
        column: int | None = None,
        key: str | None = None,
    ) -> None:
        super().__init__(message)
        self.line = line
        self.column = column
        self.key = key
