"""
Episode execution and table-style evaluation.

Episode ``i`` of an evaluation uses ``np.random.default_rng(seed + i)``,
so policies compared under the same seed see the same placements and
the first readings (paired evaluation).
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..histogram import localization_error
from . import EnvConfig, EpisodeState
from .env import reset, step
from .policies import Policy
from .records import EpisodeRecord, StepRecord

logger = logging.getLogger("active-localize.sim")


def _snapshot(state: EpisodeState, heading: float | None, rewards=None) -> StepRecord:
    preds = tuple(state.stack.predict_map())
    return StepRecord(
        t=state.t,
        p=state.p,
        heading=heading,
        measurements=state.measurements,
        targets=state.q,
        predictions=preds,
        error=localization_error(preds, state.q),
        reward_multimodal=rewards.multimodal if rewards is not None else None,
        reward_image=rewards.image if rewards is not None else None,
    )


def run_episode(
    policy: Policy,
    cfg: EnvConfig,
    rng: np.random.Generator,
    seed: int = 0,
    initial: EpisodeState | None = None,
) -> EpisodeRecord:
    """Roll out ``policy`` for the full horizon.

    Errors are the mean MAP-to-truth distance against the targets'
    positions at that step.
    """
    state = initial if initial is not None else reset(cfg, rng)
    record = EpisodeRecord(policy=policy.name, seed=seed, steps=[_snapshot(state, None)])
    while state.t < cfg.horizon:
        heading = policy.act(state, cfg, rng)
        state, rewards = step(state, heading, cfg, rng)
        record.steps.append(_snapshot(state, heading, rewards))
    record.final = state
    return record


@dataclass
class EvaluationResult:
    """Final-error statistics plus the per-step error curve."""
    policy: str
    seed: int
    mean_error: float
    std_error: float
    final_errors: list[float]
    curve_mean: list[float] = field(default_factory=list)
    curve_std: list[float] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.final_errors)


def _episode_errors(policy: Policy, cfg: EnvConfig, seed: int) -> list[float]:
    return run_episode(policy, cfg, np.random.default_rng(seed), seed=seed).errors


def evaluate(
    policy: Policy,
    cfg: EnvConfig,
    n_episodes: int,
    seed: int,
    workers: int = 1,
) -> EvaluationResult:
    """Run ``n_episodes`` seeded episodes and summarize their errors.

    ``final_errors`` is in episode order; statistics use population
    standard deviation, so a single episode has std 0.
    """
    if n_episodes < 1:
        raise ValueError(f"n_episodes must be at least 1, got {n_episodes}")
    cfg.validate()
    seeds = [seed + i for i in range(n_episodes)]
    logger.info("evaluating %s on %d episodes (seed %d, workers %d)", policy.name, n_episodes, seed, workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            curves = list(pool.map(_episode_errors, [policy] * n_episodes, [cfg] * n_episodes, seeds))
    else:
        curves = [_episode_errors(policy, cfg, s) for s in seeds]

    errors = np.array(curves)
    finals = errors[:, -1]
    ordered = np.sort(finals)
    return EvaluationResult(
        policy=policy.name,
        seed=seed,
        mean_error=float(np.mean(ordered)),
        std_error=float(np.std(ordered)),
        final_errors=[float(e) for e in finals],
        curve_mean=[float(v) for v in errors.mean(axis=0)],
        curve_std=[float(v) for v in errors.std(axis=0)],
    )
