"""
Planar geometry and sensor models.

Points, angles, the environment rectangle, and the bearing/range
measurement models with Gaussian noise. All randomness comes from a
``numpy.random.Generator`` owned by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateGeometryError

TWO_PI = 2.0 * math.pi

# Angles this close below -pi are treated as lying on the +pi side of the cut.
_WRAP_EPS = 1e-12


@dataclass(frozen=True)
class Point2:
    """A point in the global frame (environment units)."""
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Point2 components must be finite, got ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    def offset(self, length: float, heading: float) -> Point2:
        """Point reached by moving ``length`` along ``heading``."""
        return Point2(self.x + length * math.cos(heading), self.y + length * math.sin(heading))

    def to_list(self) -> list[float]:
        return [self.x, self.y]

    @classmethod
    def from_list(cls, data: list[float] | tuple[float, float]) -> Point2:
        return cls(float(data[0]), float(data[1]))


@dataclass(frozen=True)
class Extent:
    """Axis-aligned environment rectangle V."""
    xmin: float = 0.0
    ymin: float = 0.0
    xmax: float = 20.0
    ymax: float = 20.0

    def __post_init__(self) -> None:
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError(
                f"Extent must be non-empty, got x[{self.xmin}, {self.xmax}] y[{self.ymin}, {self.ymax}]"
            )

    @classmethod
    def square(cls, size: float) -> Extent:
        return cls(0.0, 0.0, float(size), float(size))

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> Point2:
        return Point2(0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))

    def contains(self, p: Point2) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax

    def clamp(self, p: Point2) -> Point2:
        return Point2(
            min(max(p.x, self.xmin), self.xmax),
            min(max(p.y, self.ymin), self.ymax),
        )

    def shrink(self, margin: float) -> Extent:
        """Rectangle inset by ``margin`` on every side."""
        return Extent(self.xmin + margin, self.ymin + margin, self.xmax - margin, self.ymax - margin)

    def to_list(self) -> list[float]:
        return [self.xmin, self.ymin, self.xmax, self.ymax]


class SensorKind(Enum):
    """Relative measurement type."""

    BEARING = "bearing"
    RANGE = "range"


# Evaluation defaults: bearing variance 0.2^2, range variance 1.
DEFAULT_SIGMA = {SensorKind.BEARING: 0.2, SensorKind.RANGE: 1.0}


@dataclass(frozen=True)
class MeasurementModel:
    """Bearing or range sensor with zero-mean Gaussian noise of std ``sigma``."""
    kind: SensorKind
    sigma: float

    def __post_init__(self) -> None:
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @classmethod
    def bearing(cls, sigma: float = DEFAULT_SIGMA[SensorKind.BEARING]) -> MeasurementModel:
        return cls(SensorKind.BEARING, sigma)

    @classmethod
    def range(cls, sigma: float = DEFAULT_SIGMA[SensorKind.RANGE]) -> MeasurementModel:
        return cls(SensorKind.RANGE, sigma)

    @classmethod
    def for_kind(cls, kind: SensorKind, sigma: float | None = None) -> MeasurementModel:
        """Model of ``kind``; ``sigma=None`` picks the kind's default noise."""
        return cls(kind, DEFAULT_SIGMA[kind] if sigma is None else float(sigma))

    @property
    def variance(self) -> float:
        return self.sigma * self.sigma

    def true_value(self, p: Point2, q: Point2) -> float:
        """Noise-free reading from sensor ``p`` of target ``q``."""
        if self.kind is SensorKind.BEARING:
            return bearing_to(p, q)
        return range_to(p, q)

    def residual(self, z_v: np.ndarray | float, z_hat: np.ndarray | float) -> np.ndarray | float:
        """Difference between predicted and measured readings.

        Bearing residuals are wrapped to (-pi, pi].
        """
        diff = np.subtract(z_v, z_hat)
        if self.kind is SensorKind.BEARING:
            return wrap_angles(diff)
        return diff


@dataclass(frozen=True)
class Measurement:
    """A noisy reading ``value`` of target ``target_index``."""
    value: float
    target_index: int

    def to_dict(self) -> dict[str, float | int]:
        return {"value": self.value, "target": self.target_index}


def bearing_to(p: Point2, q: Point2) -> float:
    """Full-quadrant bearing from ``p`` to ``q`` in (-pi, pi]."""
    dx = q.x - p.x
    dy = q.y - p.y
    if dx == 0.0 and dy == 0.0:
        raise DegenerateGeometryError(f"bearing undefined for coincident points ({p.x}, {p.y})")
    return wrap_angle(math.atan2(dy, dx))


def range_to(p: Point2, q: Point2) -> float:
    return math.hypot(q.x - p.x, q.y - p.y)


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    r = math.remainder(a, TWO_PI)
    if r <= -math.pi + _WRAP_EPS:
        return math.pi
    return r


def wrap_angles(a: np.ndarray | float) -> np.ndarray:
    """Vectorized :func:`wrap_angle`."""
    return math.pi - np.mod(math.pi - np.asarray(a, dtype=float), TWO_PI)


def sample_measurement(
    model: MeasurementModel,
    p: Point2,
    q: Point2,
    rng: np.random.Generator,
    target_index: int = 0,
) -> Measurement:
    """Draw one noisy reading of ``q`` from ``p``.

    Range readings are not clamped, so they can come out negative.
    """
    value = model.true_value(p, q) + rng.normal(0.0, model.sigma)
    if model.kind is SensorKind.BEARING:
        value = wrap_angle(value)
    return Measurement(value=float(value), target_index=target_index)


def sample_readings(
    model: MeasurementModel, p: Point2, q: Point2, n: int, rng: np.random.Generator
) -> np.ndarray:
    """``n`` noisy readings of ``q`` from ``p`` in one draw."""
    values = model.true_value(p, q) + rng.normal(0.0, model.sigma, size=n)
    if model.kind is SensorKind.BEARING:
        values = wrap_angles(values)
    return values
