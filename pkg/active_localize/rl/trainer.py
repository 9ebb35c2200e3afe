"""
TD3 training loop over the localization environment.

Everything is drawn from one generator seeded by ``seed``, so a run is
reproducible end to end.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import TrainingDivergedError
from ..sim import EnvConfig, EpisodeState, Rewards
from ..sim.env import reset, step
from . import RewardKind, Td3Config
from .agent import Td3Agent, select_action, td3_update
from .buffer import ReplayBuffer
from .mlp import Mlp
from .state import build_state_multimodal, state_dim

logger = logging.getLogger("active-localize.rl")

LOG_EVERY = 50


@dataclass
class EpisodeStats:
    """One row of the learning curve."""
    episode: int
    ret: float
    critic_loss: float | None
    actor_loss: float | None


@dataclass
class TrainResult:
    """Trained actor and per-episode learning curve."""
    actor: Mlp
    curve: list[EpisodeStats] = field(default_factory=list)

    @property
    def returns(self) -> list[float]:
        return [s.ret for s in self.curve]


def _state_vector(state: EpisodeState, cfg: EnvConfig) -> np.ndarray:
    return build_state_multimodal(state.p, state.measurements, state.stack.predict_map(), cfg.extent, cfg.model.kind)


def _pick_reward(rewards: Rewards, kind: RewardKind) -> float:
    return rewards.multimodal if kind is RewardKind.MULTIMODAL else rewards.image


def _mean(values: list[float]) -> float | None:
    return float(np.mean(values)) if values else None


def train(
    env_cfg: EnvConfig,
    td3_cfg: Td3Config,
    seed: int,
    on_episode: Callable[[EpisodeStats], None] | None = None,
) -> TrainResult:
    """Train an actor for ``td3_cfg.episodes`` episodes.

    The first ``start_steps`` environment steps use uniform random
    headings; afterwards the actor acts with Gaussian exploration noise.
    Transitions are labeled terminal only at the horizon.
    """
    env_cfg.validate()
    td3_cfg.validate()
    rng = np.random.default_rng(seed)
    dim = state_dim(env_cfg.m)
    agent = Td3Agent(dim, td3_cfg, rng)
    buffer = ReplayBuffer(td3_cfg.buffer_capacity, dim)
    result = TrainResult(actor=agent.actor)
    total_steps = 0

    for episode in range(td3_cfg.episodes):
        state = reset(env_cfg, rng)
        s = _state_vector(state, env_cfg)
        ret = 0.0
        critic_losses: list[float] = []
        actor_losses: list[float] = []
        while state.t < env_cfg.horizon:
            if total_steps < td3_cfg.start_steps:
                heading = float(rng.uniform(0.0, 2.0 * math.pi))
            else:
                heading = select_action(agent.actor, s, td3_cfg.exploration_noise, rng)
            state, rewards = step(state, heading, env_cfg, rng)
            s_next = _state_vector(state, env_cfg)
            r = _pick_reward(rewards, td3_cfg.reward)
            buffer.add(s, heading, s_next, r, done=state.t >= env_cfg.horizon)
            s = s_next
            ret += r
            total_steps += 1

            losses = td3_update(agent, buffer, td3_cfg, rng)
            if losses is None:
                continue
            critic = 0.5 * (losses.critic1 + losses.critic2)
            if not math.isfinite(critic) or (losses.actor is not None and not math.isfinite(losses.actor)):
                raise TrainingDivergedError(
                    f"non-finite loss at episode {episode}, update {agent.updates} "
                    f"(critic={critic}, actor={losses.actor})"
                )
            critic_losses.append(critic)
            if losses.actor is not None:
                actor_losses.append(losses.actor)

        stats = EpisodeStats(episode, ret, _mean(critic_losses), _mean(actor_losses))
        result.curve.append(stats)
        if on_episode is not None:
            on_episode(stats)
        if (episode + 1) % LOG_EVERY == 0:
            recent = result.returns[-LOG_EVERY:]
            logger.info("episode %d/%d mean return %.3f", episode + 1, td3_cfg.episodes, float(np.mean(recent)))

    return result
