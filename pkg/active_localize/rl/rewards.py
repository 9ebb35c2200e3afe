"""The two training rewards."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..geometry import Point2
from ..histogram import BeliefImage


def reward_multimodal(q: Sequence[Point2], q_hat: Sequence[Point2]) -> float:
    """Negative mean squared distance between true and predicted targets."""
    if len(q) != len(q_hat):
        raise ValueError(f"{len(q_hat)} predictions for {len(q)} targets")
    sq = [(a.x - b.x) ** 2 + (a.y - b.y) ** 2 for a, b in zip(q, q_hat)]
    return -float(np.mean(sq))


def reward_image(img: BeliefImage) -> float:
    """Negative mean pixel intensity; needs no ground truth."""
    return -img.mean_intensity()
