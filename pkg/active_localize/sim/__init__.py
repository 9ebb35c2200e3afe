"""Episodic localization environment.

Value types shared by the environment, policies and runner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, NamedTuple

from ..geometry import Extent, Measurement, MeasurementModel, Point2, SensorKind
from ..histogram import DEFAULT_GRID, BeliefStack


class Dynamics(Enum):
    """Target motion model."""

    STATIC = "static"
    BROWNIAN = "brownian"


@dataclass(frozen=True)
class EnvConfig:
    """Environment geometry, sensing and horizon.

    Defaults follow the evaluation setup: 20x20 area, 0.5 step, 50 steps,
    bearing sigma 0.2, 200x200 grid, Brownian covariance 0.1 I2.
    """
    extent: Extent = field(default_factory=Extent)
    delta_p: float = 0.5
    horizon: int = 50
    model: MeasurementModel = field(default_factory=MeasurementModel.bearing)
    m: int = 2
    dynamics: Dynamics = Dynamics.STATIC
    brownian_cov: tuple[tuple[float, float], tuple[float, float]] = ((0.1, 0.0), (0.0, 0.1))
    grid_w: int = DEFAULT_GRID
    grid_h: int = DEFAULT_GRID
    image_w: int | None = None
    image_h: int | None = None
    target_margin: float = 1.0
    min_separation: float = 1.0

    def validate(self) -> None:
        if not (self.delta_p > 0 and math.isfinite(self.delta_p)):
            raise ValueError(f"delta_p must be positive, got {self.delta_p}")
        if self.horizon < 0:
            raise ValueError(f"horizon must be non-negative, got {self.horizon}")
        if self.m < 1:
            raise ValueError(f"need at least one target, got m={self.m}")
        if self.grid_w < 1 or self.grid_h < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.grid_w}x{self.grid_h}")
        (a, b), (c, d) = self.brownian_cov
        if b != c or a < 0 or d < 0 or a * d - b * c < 0:
            raise ValueError(f"brownian_cov must be symmetric positive semidefinite, got {self.brownian_cov}")
        inner = 2 * self.target_margin
        if inner >= self.extent.width or inner >= self.extent.height:
            raise ValueError(f"target_margin {self.target_margin} leaves no room in the extent")

    @property
    def image_size(self) -> tuple[int, int]:
        return self.image_w or self.grid_w, self.image_h or self.grid_h

    def to_dict(self) -> dict[str, Any]:
        return {
            "extent": self.extent.to_list(),
            "delta_p": self.delta_p,
            "horizon": self.horizon,
            "model": self.model.kind.value,
            "sigma": self.model.sigma,
            "m": self.m,
            "dynamics": self.dynamics.value,
            "brownian_cov": [list(r) for r in self.brownian_cov],
            "grid_w": self.grid_w,
            "grid_h": self.grid_h,
            "image_w": self.image_w,
            "image_h": self.image_h,
            "target_margin": self.target_margin,
            "min_separation": self.min_separation,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EnvConfig:
        kind = SensorKind(data.get("model", SensorKind.BEARING.value))
        cov = data.get("brownian_cov", [[0.1, 0.0], [0.0, 0.1]])
        return cls(
            extent=Extent(*data.get("extent", [0.0, 0.0, 20.0, 20.0])),
            delta_p=float(data.get("delta_p", 0.5)),
            horizon=int(data.get("horizon", 50)),
            model=MeasurementModel.for_kind(kind, data.get("sigma")),
            m=int(data.get("m", 2)),
            dynamics=Dynamics(data.get("dynamics", Dynamics.STATIC.value)),
            brownian_cov=(tuple(cov[0]), tuple(cov[1])),
            grid_w=int(data.get("grid_w", DEFAULT_GRID)),
            grid_h=int(data.get("grid_h", DEFAULT_GRID)),
            image_w=data.get("image_w"),
            image_h=data.get("image_h"),
            target_margin=float(data.get("target_margin", 1.0)),
            min_separation=float(data.get("min_separation", 1.0)),
        )


@dataclass(frozen=True)
class EpisodeState:
    """Robot, true targets and beliefs at step ``t``."""
    t: int
    p: Point2
    q: tuple[Point2, ...]
    stack: BeliefStack
    measurements: tuple[Measurement, ...]
    trajectory: tuple[Point2, ...]


class Rewards(NamedTuple):
    """Both rewards for one transition."""
    multimodal: float
    image: float
