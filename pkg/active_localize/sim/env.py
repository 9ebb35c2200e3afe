"""
Environment transitions.

``reset`` samples initial placements, ``step`` moves the holonomic robot,
advances the targets, takes one reading per target (perfect assignment)
and updates every histogram.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from ..errors import PlacementError
from ..geometry import Extent, Point2, range_to, sample_measurement
from ..histogram import BeliefStack, aggregate_image
from ..rl.rewards import reward_image, reward_multimodal
from . import Dynamics, EnvConfig, EpisodeState, Rewards

logger = logging.getLogger("active-localize.sim")

MAX_PLACEMENT_TRIES = 1000


def _uniform_point(extent: Extent, rng: np.random.Generator) -> Point2:
    return Point2(float(rng.uniform(extent.xmin, extent.xmax)), float(rng.uniform(extent.ymin, extent.ymax)))


def _measure(cfg: EnvConfig, p: Point2, q: Sequence[Point2], rng: np.random.Generator):
    return tuple(sample_measurement(cfg.model, p, qi, rng, target_index=i) for i, qi in enumerate(q))


def reset(
    cfg: EnvConfig,
    rng: np.random.Generator,
    robot: Point2 | None = None,
    targets: Sequence[Point2] | None = None,
) -> EpisodeState:
    """Initial state with uniform beliefs and a first set of readings.

    The robot is uniform in the extent; targets are uniform at least
    ``target_margin`` from the walls and ``min_separation`` from the robot.
    ``robot``/``targets`` override the sampled placements. The first
    readings feed the policy state; histograms start uniform.
    """
    cfg.validate()
    p = robot if robot is not None else _uniform_point(cfg.extent, rng)
    if targets is not None:
        if len(targets) != cfg.m:
            raise ValueError(f"{len(targets)} targets given for m={cfg.m}")
        q = tuple(targets)
    else:
        inner = cfg.extent.shrink(cfg.target_margin)
        placed: list[Point2] = []
        tries = 0
        while len(placed) < cfg.m:
            tries += 1
            if tries > MAX_PLACEMENT_TRIES:
                raise PlacementError(
                    f"could not place {cfg.m} targets {cfg.min_separation} from the robot "
                    f"in {MAX_PLACEMENT_TRIES} tries"
                )
            cand = _uniform_point(inner, rng)
            if range_to(p, cand) >= cfg.min_separation:
                placed.append(cand)
        q = tuple(placed)

    stack = BeliefStack.uniform(cfg.m, cfg.grid_w, cfg.grid_h, cfg.extent)
    return EpisodeState(t=0, p=p, q=q, stack=stack, measurements=_measure(cfg, p, q, rng), trajectory=(p,))


def brownian_step(
    q: Point2,
    cov: Sequence[Sequence[float]],
    rng: np.random.Generator,
    extent: Extent | None = None,
) -> Point2:
    """Add a zero-mean Gaussian displacement, clamped to ``extent`` when given."""
    dx, dy = rng.multivariate_normal(np.zeros(2), np.asarray(cov, dtype=float))
    moved = Point2(q.x + float(dx), q.y + float(dy))
    return extent.clamp(moved) if extent is not None else moved


def step(
    state: EpisodeState, heading: float, cfg: EnvConfig, rng: np.random.Generator
) -> tuple[EpisodeState, Rewards]:
    """Advance one step along ``heading`` and return the new state and rewards."""
    if state.t >= cfg.horizon:
        raise ValueError(f"episode already at horizon t={state.t}")
    p = cfg.extent.clamp(state.p.offset(cfg.delta_p, heading))
    q = state.q
    if cfg.dynamics is Dynamics.BROWNIAN:
        q = tuple(brownian_step(qi, cfg.brownian_cov, rng, cfg.extent) for qi in q)
    measurements = _measure(cfg, p, q, rng)
    stack = state.stack.update(p, measurements, cfg.model)

    q_hat = stack.predict_map()
    img = aggregate_image(stack, *cfg.image_size)
    rewards = Rewards(multimodal=reward_multimodal(q, q_hat), image=reward_image(img))
    nxt = EpisodeState(
        t=state.t + 1,
        p=p,
        q=q,
        stack=stack,
        measurements=measurements,
        trajectory=state.trajectory + (p,),
    )
    return nxt, rewards
