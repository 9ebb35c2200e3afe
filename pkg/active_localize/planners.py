"""
Heading planners.

Offline-Fisher greedily minimizes the summed Fisher uncertainty using the
true target positions. Greedy-Local minimizes the expected entropy of the
belief stack after one more step, using hypothetical readings drawn at the
current MAP estimates.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateGeometryError
from .geometry import Extent, MeasurementModel, Point2, sample_readings
from .histogram import BeliefStack, log_entropies, log_entropy, reading_field, trial_log_likelihoods
from .uncertainty import Fim2x2, fim_accumulate, fim_uncertainty, gdop

logger = logging.getLogger("active-localize.planners")

DEFAULT_ACTIONS = 36
DEFAULT_GREEDY_SAMPLES = 8


@dataclass(frozen=True)
class ActionSet:
    """K equally spaced headings in [0, 2*pi)."""
    k: int = DEFAULT_ACTIONS

    def __post_init__(self) -> None:
        if self.k < 4:
            raise ValueError(f"action set needs at least 4 headings, got {self.k}")

    @property
    def headings(self) -> np.ndarray:
        return np.arange(self.k) * (2.0 * math.pi / self.k)

    def __len__(self) -> int:
        return self.k


@dataclass
class Trajectory:
    """Ordered sensor positions P_1..P_T."""
    points: list[Point2] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def is_feasible(self, delta_p: float, extent: Extent, tol: float = 1e-9) -> bool:
        """Every step at most ``delta_p`` long and every point inside ``extent``."""
        if not all(extent.contains(p) for p in self.points):
            return False
        return all(
            math.hypot(b.x - a.x, b.y - a.y) <= delta_p + tol
            for a, b in zip(self.points, self.points[1:])
        )


def candidate_positions(p: Point2, actions: ActionSet, delta_p: float, extent: Extent) -> list[Point2]:
    """Next positions for every heading, clamped to ``extent``."""
    return [extent.clamp(p.offset(delta_p, float(a))) for a in actions.headings]


def _argmin(scores: Sequence[float]) -> int:
    # Strict comparison keeps the lowest index on ties, including ties at inf.
    best = 0
    for i, s in enumerate(scores):
        if s < scores[best]:
            best = i
    return best


def offline_fisher_step(
    trajectory: Sequence[Point2],
    targets: Sequence[Point2],
    actions: ActionSet,
    delta_p: float,
    model: MeasurementModel,
    extent: Extent,
    position: Point2 | None = None,
) -> int:
    """Index of the action minimizing total uncertainty after one more step.

    ``trajectory`` holds the positions whose readings count. The robot
    moves from ``position``, which defaults to the last of them. A past
    position that coincides with a target contributes nothing to that
    target's information.

    If every candidate leaves some target untriangulated, candidates are
    ranked by summed pairwise GDOP between the current position and the
    candidate instead, so the early steps still spread the viewpoints.
    """
    p = trajectory[-1] if position is None else position
    base = [fim_accumulate([s for s in trajectory if s != q], q, model) for q in targets]
    candidates = candidate_positions(p, actions, delta_p, extent)
    scores = [_candidate_uncertainty(c, base, targets, model) for c in candidates]
    if all(math.isinf(s) for s in scores):
        scores = [_pairwise_gdop(p, c, targets) for c in candidates]
        logger.debug("all candidates degenerate after %d readings; ranking by GDOP", len(trajectory))
    return _argmin(scores)


def _candidate_uncertainty(
    c: Point2, base: Sequence[Fim2x2], targets: Sequence[Point2], model: MeasurementModel
) -> float:
    total = 0.0
    for F, q in zip(base, targets):
        try:
            F_next = F + fim_accumulate([c], q, model)
        except DegenerateGeometryError:
            return math.inf
        total += fim_uncertainty(F_next)
    return total


def _pairwise_gdop(p: Point2, c: Point2, targets: Sequence[Point2]) -> float:
    total = 0.0
    for q in targets:
        if p == q or c == q:
            return math.inf
        total += gdop(p, c, q)
    return total


def offline_fisher_plan(
    targets: Sequence[Point2],
    start: Point2,
    T: int,
    delta_p: float,
    actions: ActionSet,
    model: MeasurementModel,
    extent: Extent | None = None,
) -> Trajectory:
    """Plan a T-point trajectory against known, static targets."""
    if T < 2:
        raise ValueError(f"horizon must be at least 2, got {T}")
    if any(start == q for q in targets):
        raise DegenerateGeometryError(f"start ({start.x}, {start.y}) coincides with a target")
    extent = extent or Extent()
    points = [start]
    headings = actions.headings
    for _ in range(2, T + 1):
        a = offline_fisher_step(points, targets, actions, delta_p, model, extent)
        points.append(extent.clamp(points[-1].offset(delta_p, float(headings[a]))))
    return Trajectory(points)


def greedy_local_step(
    stack: BeliefStack,
    p: Point2,
    actions: ActionSet,
    delta_p: float,
    model: MeasurementModel,
    samples: int,
    rng: np.random.Generator,
) -> float:
    """Heading minimizing the expected summed entropy after one step.

    For each candidate (in action order) and each target (in stack order),
    ``samples`` hypothetical readings are drawn around that target's
    current MAP estimate and applied together as trial updates. A target
    whose MAP cell coincides with the candidate keeps its current entropy
    and consumes no draws.
    """
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    maps = stack.predict_map()
    w, h, extent = stack.width, stack.height, stack.extent
    current = [log_entropy(hist.log_values) for hist in stack.histograms]
    candidates = candidate_positions(p, actions, delta_p, extent)

    scores = []
    for c in candidates:
        z_field = reading_field(w, h, extent, c, model)
        total = 0.0
        for hist, q_hat, h_now in zip(stack.histograms, maps, current):
            try:
                readings = sample_readings(model, c, q_hat, samples, rng)
            except DegenerateGeometryError:
                total += h_now * samples
                continue
            trial = hist.log_values[np.newaxis] + trial_log_likelihoods(z_field, readings, model)
            total += float(np.sum(log_entropies(trial)))
        scores.append(total / samples)
    return float(actions.headings[_argmin(scores)])
