"""
Fisher-information uncertainty measures.

The 2x2 Fisher information of a target position under bearing or range
readings, the bearing-only closed-form determinant, uncertainty ellipse
axes, the summed total uncertainty, and pairwise GDOP.

Infinite uncertainty is returned as ``math.inf`` rather than raised, so
planners can compare degenerate candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateGeometryError, UnboundedUncertaintyError
from .geometry import MeasurementModel, Point2, SensorKind, bearing_to, range_to

# det(F) at or below this counts as singular. Adding readings never lowers det(F).
DET_ATOL = 1e-9

# |sin(dphi)| below this counts as collinear for GDOP.
SIN_ATOL = 1e-12


@dataclass(frozen=True)
class Fim2x2:
    """Symmetric 2x2 Fisher information matrix [[a11, a12], [a12, a22]]."""
    a11: float = 0.0
    a12: float = 0.0
    a22: float = 0.0

    def __add__(self, other: Fim2x2) -> Fim2x2:
        return Fim2x2(self.a11 + other.a11, self.a12 + other.a12, self.a22 + other.a22)

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a12

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    def is_singular(self) -> bool:
        return self.det <= DET_ATOL

    def eigenvalues(self) -> tuple[float, float]:
        """Eigenvalues (descending) via the trace/determinant quadratic."""
        half = 0.5 * self.trace
        gap = math.sqrt(max(0.25 * (self.a11 - self.a22) ** 2 + self.a12 * self.a12, 0.0))
        return half + gap, half - gap

    def axes(self) -> tuple[float, float]:
        return uncertainty_ellipse_axes(self)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a12, self.a22]], dtype=float)


def _offsets(P: Sequence[Point2], q: Point2) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Target-minus-sensor offsets and distances for every sensor position."""
    pts = np.array([[p.x, p.y] for p in P], dtype=float).reshape(-1, 2)
    dx = q.x - pts[:, 0]
    dy = q.y - pts[:, 1]
    d = np.hypot(dx, dy)
    if np.any(d == 0.0):
        raise DegenerateGeometryError(f"sensor position coincides with target ({q.x}, {q.y})")
    return dx, dy, d


def measurement_gradients(P: Sequence[Point2], q: Point2, model: MeasurementModel) -> np.ndarray:
    """Gradient of the noise-free reading w.r.t. the target, one row per sensor.

    Bearing: (-sin phi, cos phi) / d. Range: unit vector from sensor to target.
    """
    dx, dy, d = _offsets(P, q)
    if model.kind is SensorKind.BEARING:
        d2 = d * d
        return np.column_stack((-dy / d2, dx / d2))
    return np.column_stack((dx / d, dy / d))


def fim_accumulate(P: Sequence[Point2], q: Point2, model: MeasurementModel) -> Fim2x2:
    """Fisher information of ``q`` after readings from every point in ``P``."""
    if len(P) == 0:
        return Fim2x2()
    g = measurement_gradients(P, q, model)
    inv_var = 1.0 / model.variance
    return Fim2x2(
        a11=float(inv_var * np.dot(g[:, 0], g[:, 0])),
        a12=float(inv_var * np.dot(g[:, 0], g[:, 1])),
        a22=float(inv_var * np.dot(g[:, 1], g[:, 1])),
    )


def fim_det_bearing_closed_form(P: Sequence[Point2], q: Point2, sigma2: float) -> float:
    """Pairwise-sum determinant of the bearing-only Fisher information."""
    if len(P) < 2:
        return 0.0
    dx, dy, d = _offsets(P, q)
    phi = np.arctan2(dy, dx)
    i, j = np.triu_indices(len(P), k=1)
    terms = np.sin(phi[i] - phi[j]) ** 2 / (d[i] ** 2 * d[j] ** 2)
    return float(terms.sum() / (sigma2 * sigma2))


def uncertainty_ellipse_axes(F: Fim2x2) -> tuple[float, float]:
    """Semi-axis lengths sqrt(eig(F^-1)), longest first."""
    if F.is_singular():
        raise UnboundedUncertaintyError(f"singular Fisher information (det={F.det:g})")
    big, small = F.eigenvalues()
    return math.sqrt(1.0 / small), math.sqrt(1.0 / big)


def fim_uncertainty(F: Fim2x2) -> float:
    """det(F^-1), or ``math.inf`` when F is singular."""
    if F.is_singular():
        return math.inf
    return 1.0 / F.det


def target_uncertainty(P: Sequence[Point2], q: Point2, model: MeasurementModel) -> float:
    return fim_uncertainty(fim_accumulate(P, q, model))


def total_uncertainty(P: Sequence[Point2], targets: Sequence[Point2], model: MeasurementModel) -> float:
    """Sum over targets of det(F^-1); ``math.inf`` if any target is untriangulated."""
    return math.fsum(target_uncertainty(P, q, model) for q in targets)


def gdop(p_i: Point2, p_j: Point2, q: Point2) -> float:
    """Pairwise geometric dilution of precision d_i * d_j / |sin(phi_i - phi_j)|."""
    s = abs(math.sin(bearing_to(p_i, q) - bearing_to(p_j, q)))
    if s < SIN_ATOL:
        return math.inf
    return range_to(p_i, q) * range_to(p_j, q) / s
