"""Multi-modal policy input: robot position, latest readings, MAP estimates."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..geometry import Extent, Measurement, Point2, SensorKind


def state_dim(m: int) -> int:
    """Length of the state vector for ``m`` targets."""
    return 2 + m + 2 * m


def _scale_x(x: float, extent: Extent) -> float:
    return 2.0 * (x - extent.xmin) / extent.width - 1.0


def _scale_y(y: float, extent: Extent) -> float:
    return 2.0 * (y - extent.ymin) / extent.height - 1.0


def build_state_multimodal(
    p: Point2,
    z_hats: Sequence[Measurement],
    q_hats: Sequence[Point2],
    extent: Extent,
    kind: SensorKind = SensorKind.BEARING,
) -> np.ndarray:
    """Concatenate (p, z, q_hat) scaled to roughly [-1, 1].

    Positions are mapped linearly from the extent to [-1, 1]; bearings are
    divided by pi; ranges are mapped from [0, diagonal] to [-1, 1].
    """
    if len(z_hats) != len(q_hats):
        raise ValueError(f"{len(z_hats)} readings for {len(q_hats)} predictions")
    if kind is SensorKind.BEARING:
        obs = [z.value / math.pi for z in z_hats]
    else:
        obs = [2.0 * z.value / extent.diagonal - 1.0 for z in z_hats]
    preds: list[float] = []
    for q in q_hats:
        preds.extend((_scale_x(q.x, extent), _scale_y(q.y, extent)))
    return np.array([_scale_x(p.x, extent), _scale_y(p.y, extent), *obs, *preds], dtype=float)
