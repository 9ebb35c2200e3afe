"""
TD3 actor/critic agent.

The actor maps a state to a 2-vector whose direction is the heading.
Critics score (state, cos a, sin a), so headings have no wrap seam in
the network inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import Td3Config
from .buffer import Batch, ReplayBuffer
from .mlp import AdamState, Mlp, adam_step, backward_cached, forward_cached, soft_update

TWO_PI = 2.0 * math.pi

# Actor outputs shorter than this are treated as zero when normalizing.
_NORM_FLOOR = 1e-12


def heading_features(headings: np.ndarray | float) -> np.ndarray:
    """(cos a, sin a) rows for one heading or a batch."""
    a = np.asarray(headings, dtype=float)
    return np.stack((np.cos(a), np.sin(a)), axis=-1)


def output_to_heading(out: np.ndarray) -> np.ndarray | float:
    """atan2 of actor output(s), in [0, 2*pi); zero vectors map to 0."""
    out = np.asarray(out, dtype=float)
    norm = np.hypot(out[..., 0], out[..., 1])
    h = np.where(norm > _NORM_FLOOR, np.arctan2(out[..., 1], out[..., 0]), 0.0)
    h = np.mod(h, TWO_PI)
    return np.where(h >= TWO_PI, 0.0, h)


def select_action(
    actor: Mlp,
    s: np.ndarray,
    exploration_noise: float = 0.0,
    rng: np.random.Generator | None = None,
) -> float:
    """Heading in [0, 2*pi) from the actor, with optional Gaussian jitter."""
    if actor.output_size != 2:
        raise ValueError(f"actor must emit a 2-vector, has output size {actor.output_size}")
    h = float(output_to_heading(actor.forward(s)))
    if exploration_noise > 0.0 and rng is not None:
        h += rng.normal(0.0, exploration_noise)
    h = math.fmod(h, TWO_PI)
    if h < 0.0:
        h += TWO_PI
    return 0.0 if h >= TWO_PI else h


@dataclass
class Td3Losses:
    """Losses from one update; ``actor`` is None on critic-only updates."""
    critic1: float
    critic2: float
    actor: float | None


class Td3Agent:
    """Actor, twin critics, their target copies and optimizer state."""

    def __init__(self, state_dim: int, cfg: Td3Config, rng: np.random.Generator) -> None:
        hidden = list(cfg.hidden)
        self.state_dim = state_dim
        self.actor = Mlp.create([state_dim, *hidden, 2], rng)
        self.critic1 = Mlp.create([state_dim + 2, *hidden, 1], rng)
        self.critic2 = Mlp.create([state_dim + 2, *hidden, 1], rng)
        self.actor_target = self.actor.copy()
        self.critic1_target = self.critic1.copy()
        self.critic2_target = self.critic2.copy()
        self.actor_opt = AdamState.for_params(self.actor.parameters())
        self.critic1_opt = AdamState.for_params(self.critic1.parameters())
        self.critic2_opt = AdamState.for_params(self.critic2.parameters())
        self.updates = 0

    def blend_targets(self, tau: float) -> None:
        soft_update(self.actor_target, self.actor, tau)
        soft_update(self.critic1_target, self.critic1, tau)
        soft_update(self.critic2_target, self.critic2, tau)


def td3_targets(agent: Td3Agent, batch: Batch, cfg: Td3Config, rng: np.random.Generator) -> np.ndarray:
    """Bellman targets r + gamma * (1 - y) * min(Q1', Q2') with smoothed target actions."""
    next_h = output_to_heading(agent.actor_target.forward(batch.next_states))
    noise = np.clip(rng.normal(0.0, cfg.target_noise, size=len(batch)), -cfg.noise_clip, cfg.noise_clip)
    x_next = np.hstack((batch.next_states, heading_features(next_h + noise)))
    q_next = np.minimum(agent.critic1_target.forward(x_next), agent.critic2_target.forward(x_next))[:, 0]
    return batch.rewards + cfg.gamma * (1.0 - batch.dones) * q_next


def _critic_step(critic: Mlp, opt: AdamState, x: np.ndarray, target: np.ndarray, lr: float) -> float:
    pred, cache = forward_cached(critic, x)
    err = pred[:, 0] - target
    loss = float(np.mean(err * err))
    upstream = (2.0 / len(err)) * err[:, None]
    grads = backward_cached(critic, cache, upstream)
    adam_step(critic.parameters(), grads.params, opt, lr)
    return loss


def _actor_step(agent: Td3Agent, states: np.ndarray, lr: float) -> float:
    out, actor_cache = forward_cached(agent.actor, states)
    norm = np.maximum(np.hypot(out[:, 0], out[:, 1]), _NORM_FLOOR)[:, None]
    f = out / norm
    q, critic_cache = forward_cached(agent.critic1, np.hstack((states, f)))
    loss = -float(np.mean(q))
    grad_x = backward_cached(agent.critic1, critic_cache, np.full_like(q, -1.0 / len(q))).inputs
    g_f = grad_x[:, agent.state_dim:]
    # d(u/|u|)/du = (I - f f^T) / |u|
    g_u = (g_f - np.sum(g_f * f, axis=1, keepdims=True) * f) / norm
    grads = backward_cached(agent.actor, actor_cache, g_u)
    adam_step(agent.actor.parameters(), grads.params, agent.actor_opt, lr)
    return loss


def td3_update(
    agent: Td3Agent, buffer: ReplayBuffer, cfg: Td3Config, rng: np.random.Generator
) -> Td3Losses | None:
    """One TD3 update; returns None when the buffer holds fewer than a batch."""
    if len(buffer) < cfg.batch_size:
        return None
    batch = buffer.sample(cfg.batch_size, rng)
    target = td3_targets(agent, batch, cfg, rng)
    x = np.hstack((batch.states, heading_features(batch.actions)))
    loss1 = _critic_step(agent.critic1, agent.critic1_opt, x, target, cfg.critic_lr)
    loss2 = _critic_step(agent.critic2, agent.critic2_opt, x, target, cfg.critic_lr)
    agent.updates += 1

    actor_loss = None
    if agent.updates % cfg.policy_delay == 0:
        actor_loss = _actor_step(agent, batch.states, cfg.actor_lr)
        agent.blend_targets(cfg.tau)
    return Td3Losses(loss1, loss2, actor_loss)
