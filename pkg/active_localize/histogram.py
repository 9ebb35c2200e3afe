"""
Bayesian histogram filter.

Each target gets a grid over the environment whose cells hold the
likelihood that the target lies there. Cells are stored as log-likelihood
accumulators shifted so the maximum is 0; linear values (max 1) are
materialized on demand.

Arrays are indexed ``[row, col]`` with row 0 at the bottom of the extent
(smallest y) and column 0 at the left (smallest x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import ndimage, special, stats

from .errors import NumericalDegeneracyError
from .geometry import Extent, Measurement, MeasurementModel, Point2, SensorKind

DEFAULT_GRID = 200


@lru_cache(maxsize=32)
def cell_centers(width: int, height: int, extent: Extent) -> tuple[np.ndarray, np.ndarray]:
    """Cell-center coordinate grids, each shaped (height, width)."""
    xs = extent.xmin + (np.arange(width) + 0.5) * (extent.width / width)
    ys = extent.ymin + (np.arange(height) + 0.5) * (extent.height / height)
    gx, gy = np.meshgrid(xs, ys)
    gx.setflags(write=False)
    gy.setflags(write=False)
    return gx, gy


def cell_index(width: int, height: int, extent: Extent, p: Point2) -> tuple[int, int] | None:
    """(row, col) of the cell containing ``p``, or None outside the extent."""
    if not extent.contains(p):
        return None
    col = min(int((p.x - extent.xmin) / extent.width * width), width - 1)
    row = min(int((p.y - extent.ymin) / extent.height * height), height - 1)
    return row, col


def point_likelihood(v: Point2, p: Point2, z_hat: Measurement, model: MeasurementModel) -> float:
    """Gaussian density of reading ``z_hat`` if the target were at ``v``."""
    if model.kind is SensorKind.BEARING and v == p:
        residual = 0.0
    else:
        residual = float(model.residual(model.true_value(p, v), z_hat.value))
    return float(stats.norm.pdf(residual, scale=model.sigma))


def log_likelihood_field(
    width: int,
    height: int,
    extent: Extent,
    p: Point2,
    z_hat: float,
    model: MeasurementModel,
    z_field: np.ndarray | None = None,
) -> np.ndarray:
    """Log density of ``z_hat`` evaluated at every cell center.

    ``z_field`` may carry precomputed noise-free readings from ``p``.
    """
    if z_field is None:
        z_field = reading_field(width, height, extent, p, model)
    # NaN marks the sensor cell; it gets the peak density.
    residual = np.nan_to_num(model.residual(z_field, z_hat), nan=0.0)
    return stats.norm.logpdf(residual, scale=model.sigma)


def reading_field(width: int, height: int, extent: Extent, p: Point2, model: MeasurementModel) -> np.ndarray:
    """Noise-free reading from ``p`` to every cell center.

    For bearings, the cell holding the sensor has no defined angle; it is
    given NaN here and scored as a zero residual.
    """
    gx, gy = cell_centers(width, height, extent)
    dx = gx - p.x
    dy = gy - p.y
    if model.kind is SensorKind.RANGE:
        return np.hypot(dx, dy)
    field_ = np.arctan2(dy, dx)
    idx = cell_index(width, height, extent, p)
    if idx is not None:
        field_[idx] = np.nan
    return field_


@dataclass(frozen=True)
class GridHistogram:
    """Max-normalized likelihood grid for one target."""
    width: int
    height: int
    extent: Extent
    log_values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.width}x{self.height}")
        if self.log_values.shape != (self.height, self.width):
            raise ValueError(
                f"log_values shape {self.log_values.shape} does not match grid {self.height}x{self.width}"
            )

    @property
    def values(self) -> np.ndarray:
        """Linear cell values in [0, 1]."""
        return np.exp(self.log_values)

    @classmethod
    def from_values(cls, values: np.ndarray, extent: Extent) -> GridHistogram:
        """Build from linear values (rescaled so the max is 1)."""
        values = np.asarray(values, dtype=float)
        with np.errstate(divide="ignore"):
            log_values = np.log(values)
        top = np.max(log_values)
        if not np.isfinite(top):
            raise NumericalDegeneracyError("histogram has no positive cell")
        return cls(values.shape[1], values.shape[0], extent, log_values - top)


def init_uniform(width: int = DEFAULT_GRID, height: int = DEFAULT_GRID, extent: Extent | None = None) -> GridHistogram:
    """Uniform histogram with every cell at likelihood 1."""
    extent = extent or Extent()
    if width < 1 or height < 1:
        raise ValueError(f"grid must be at least 1x1, got {width}x{height}")
    return GridHistogram(width, height, extent, np.zeros((height, width)))


def update(hist: GridHistogram, p: Point2, z_hat: Measurement, model: MeasurementModel) -> GridHistogram:
    """Multiply in the likelihood of one reading and rescale to max 1."""
    loglik = log_likelihood_field(hist.width, hist.height, hist.extent, p, z_hat.value, model)
    return _apply(hist, loglik)


def _apply(hist: GridHistogram, loglik: np.ndarray) -> GridHistogram:
    acc = hist.log_values + loglik
    top = np.max(acc)
    if not np.isfinite(top):
        raise NumericalDegeneracyError("histogram update left no finite cell")
    return GridHistogram(hist.width, hist.height, hist.extent, acc - top)


def predict_map(hist: GridHistogram) -> Point2:
    """Center of the most likely cell; ties go to the lowest row-major index."""
    flat = int(np.argmax(hist.log_values))
    row, col = divmod(flat, hist.width)
    gx, gy = cell_centers(hist.width, hist.height, hist.extent)
    return Point2(float(gx[row, col]), float(gy[row, col]))


def log_entropy(log_values: np.ndarray) -> float:
    """Shannon entropy (nats) of exp(log_values) normalized to sum 1."""
    return float(log_entropies(log_values[np.newaxis])[0])


def log_entropies(log_values: np.ndarray) -> np.ndarray:
    """Entropy of each (height, width) slice of an (n, height, width) array."""
    lse = special.logsumexp(log_values, axis=(1, 2))
    probs = np.exp(log_values - lse[:, np.newaxis, np.newaxis])
    finite = np.where(np.isfinite(log_values), log_values, 0.0)
    return lse - np.sum(probs * finite, axis=(1, 2))


def trial_log_likelihoods(z_field: np.ndarray, readings: np.ndarray, model: MeasurementModel) -> np.ndarray:
    """Unnormalized log-likelihood of each reading at every cell, shaped (n, height, width).

    Omits the Gaussian's constant, which drops out of any max- or
    sum-normalized quantity.
    """
    residual = model.residual(z_field[np.newaxis], np.asarray(readings, dtype=float)[:, np.newaxis, np.newaxis])
    residual = np.nan_to_num(residual, nan=0.0)
    return -0.5 * np.square(residual / model.sigma)


def entropy(hist: GridHistogram) -> float:
    return log_entropy(hist.log_values)


@dataclass(frozen=True)
class BeliefStack:
    """One histogram per target, all on the same grid."""
    histograms: tuple[GridHistogram, ...]

    def __post_init__(self) -> None:
        if not self.histograms:
            raise ValueError("belief stack needs at least one histogram")
        first = self.histograms[0]
        for h in self.histograms[1:]:
            if (h.width, h.height, h.extent) != (first.width, first.height, first.extent):
                raise ValueError("all histograms in a stack must share grid size and extent")

    @classmethod
    def uniform(cls, m: int, width: int = DEFAULT_GRID, height: int = DEFAULT_GRID,
                extent: Extent | None = None) -> BeliefStack:
        base = init_uniform(width, height, extent)
        return cls(tuple(base for _ in range(m)))

    def __len__(self) -> int:
        return len(self.histograms)

    @property
    def width(self) -> int:
        return self.histograms[0].width

    @property
    def height(self) -> int:
        return self.histograms[0].height

    @property
    def extent(self) -> Extent:
        return self.histograms[0].extent

    def update(self, p: Point2, measurements: Sequence[Measurement], model: MeasurementModel) -> BeliefStack:
        """Apply one reading per target; readings are routed by ``target_index``."""
        hists = list(self.histograms)
        z_field = reading_field(self.width, self.height, self.extent, p, model)
        for z in measurements:
            loglik = log_likelihood_field(
                self.width, self.height, self.extent, p, z.value, model, z_field=z_field
            )
            hists[z.target_index] = _apply(hists[z.target_index], loglik)
        return BeliefStack(tuple(hists))

    def predict_map(self) -> list[Point2]:
        return [predict_map(h) for h in self.histograms]

    def entropies(self) -> list[float]:
        return [entropy(h) for h in self.histograms]

    def as_array(self) -> np.ndarray:
        """Linear values stacked as (m, height, width)."""
        return np.stack([h.values for h in self.histograms])


@dataclass(frozen=True)
class BeliefImage:
    """Aggregated belief, pixels in [0, 1] shaped (height, width)."""
    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def mean_intensity(self) -> float:
        return float(np.mean(self.pixels))


def resample_bilinear(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear resize with corner pixels aligned."""
    h, w = img.shape
    if (out_h, out_w) == (h, w):
        return img.copy()
    rows = _sample_positions(h, out_h)
    cols = _sample_positions(w, out_w)
    rr, cc = np.meshgrid(rows, cols, indexing="ij")
    return ndimage.map_coordinates(img, [rr, cc], order=1, mode="nearest")


def _sample_positions(n_in: int, n_out: int) -> np.ndarray:
    if n_out == 1:
        return np.array([0.5 * (n_in - 1)])
    return np.arange(n_out) * ((n_in - 1) / (n_out - 1))


def aggregate_image(stack: BeliefStack, out_w: int | None = None, out_h: int | None = None) -> BeliefImage:
    """Sum of the stack's histograms, max-normalized, resized bilinearly."""
    if out_w is None:
        out_w = stack.width
    if out_h is None:
        out_h = stack.height
    if out_w < 1 or out_h < 1:
        raise ValueError(f"image size must be at least 1x1, got {out_w}x{out_h}")
    total = np.sum(stack.as_array(), axis=0)
    total /= np.max(total)
    pixels = np.clip(resample_bilinear(total, out_w, out_h), 0.0, 1.0)
    return BeliefImage(out_w, out_h, pixels)


def localization_error(predictions: Sequence[Point2], targets: Sequence[Point2]) -> float:
    """Mean distance between predicted and true target positions."""
    if len(predictions) != len(targets):
        raise ValueError(f"{len(predictions)} predictions for {len(targets)} targets")
    return math.fsum(math.hypot(a.x - b.x, a.y - b.y) for a, b in zip(predictions, targets)) / len(targets)
