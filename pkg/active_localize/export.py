"""
Heatmap export.

A belief image is written as a binary PGM (P5) with intensities
``round(255 * pixel)``. The first row of the file is the top of the
extent (largest y). Overlays (trajectory, true targets, MAP predictions)
go to a JSON sidecar next to the image rather than into the pixels, so
the graymap stays exact:

    heat.pgm   heat.json
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from skimage import io
from skimage.util import img_as_ubyte

from .geometry import Extent, Point2
from .histogram import BeliefImage


@dataclass
class HeatmapOverlay:
    """Points drawn on top of a heatmap by whatever renders it."""
    trajectory: Sequence[Point2] = field(default_factory=list)
    targets: Sequence[Point2] = field(default_factory=list)
    predictions: Sequence[Point2] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "trajectory": [p.to_list() for p in self.trajectory],
            "targets": [q.to_list() for q in self.targets],
            "predictions": [q.to_list() for q in self.predictions],
        }


def sidecar_path(path: Path) -> Path:
    return path.with_suffix(".json")


def to_bytes(img: BeliefImage) -> np.ndarray:
    """Pixel intensities as uint8 (round(255 * pixel)), still bottom row first."""
    return img_as_ubyte(np.clip(img.pixels, 0.0, 1.0))


def export_heatmap(
    img: BeliefImage,
    path: Path | str,
    overlay: HeatmapOverlay | None = None,
    extent: Extent | None = None,
) -> Path:
    """Write ``img`` as P5 plus its overlay sidecar. Returns the image path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    io.imsave(str(path), np.flipud(to_bytes(img)), check_contrast=False)

    sidecar: dict[str, Any] = {
        "image": path.name,
        "width": img.width,
        "height": img.height,
        "extent": (extent or Extent()).to_list(),
        "origin": "top-left is (xmin, ymax)",
    }
    sidecar.update((overlay or HeatmapOverlay()).to_dict())
    sidecar_path(path).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_pgm(path: Path | str) -> np.ndarray:
    """Read an 8-bit binary PGM written by :func:`export_heatmap`.

    Returns uint8 intensities shaped (height, width) with row 0 at the
    bottom of the extent, the same orientation as ``BeliefImage.pixels``.
    """
    path = Path(path)
    with path.open("rb") as f:
        magic = f.read(2)
    if magic != b"P5":
        raise ValueError(f"not a binary PGM (magic {magic!r})")
    raster = io.imread(str(path))
    if raster.dtype != np.uint8 or raster.ndim != 2:
        raise ValueError(f"expected an 8-bit graymap, got {raster.dtype} shaped {raster.shape}")
    return np.flipud(raster).copy()
