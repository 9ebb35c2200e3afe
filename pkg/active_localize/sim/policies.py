"""
Heading policies driven by the episode runner.

Every policy is a small picklable dataclass with ``name`` and
``act(state, cfg, rng) -> heading``, so evaluation can fan out to worker
processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from ..geometry import Point2, bearing_to
from ..planners import DEFAULT_ACTIONS, DEFAULT_GREEDY_SAMPLES, ActionSet, greedy_local_step, offline_fisher_step
from ..rl.agent import select_action
from ..rl.mlp import Mlp
from ..rl.state import build_state_multimodal
from . import EnvConfig, EpisodeState


class Policy(Protocol):
    name: str

    def act(self, state: EpisodeState, cfg: EnvConfig, rng: np.random.Generator) -> float: ...


@dataclass
class OfflineFisherPolicy:
    """Oracle planner: minimizes Fisher uncertainty at the true target positions."""
    actions: ActionSet = field(default_factory=ActionSet)
    name: str = "offline"

    def act(self, state: EpisodeState, cfg: EnvConfig, rng: np.random.Generator) -> float:
        # Readings taken at reset are not applied to the beliefs, so the
        # reset position carries no information here either.
        applied = state.trajectory[1:]
        a = offline_fisher_step(
            applied, state.q, self.actions, cfg.delta_p, cfg.model, cfg.extent, position=state.p
        )
        return float(self.actions.headings[a])


@dataclass
class GreedyLocalPolicy:
    """Myopic expected-entropy minimizer over the current beliefs."""
    actions: ActionSet = field(default_factory=lambda: ActionSet(DEFAULT_ACTIONS))
    samples: int = DEFAULT_GREEDY_SAMPLES
    name: str = "greedy"

    def act(self, state: EpisodeState, cfg: EnvConfig, rng: np.random.Generator) -> float:
        return greedy_local_step(state.stack, state.p, self.actions, cfg.delta_p, cfg.model, self.samples, rng)


@dataclass
class ActorPolicy:
    """Trained actor acting on the multi-modal state, without exploration noise."""
    actor: Mlp
    name: str = "rl"

    def act(self, state: EpisodeState, cfg: EnvConfig, rng: np.random.Generator) -> float:
        s = build_state_multimodal(state.p, state.measurements, state.stack.predict_map(), cfg.extent, cfg.model.kind)
        return select_action(self.actor, s)


@dataclass
class RandomPolicy:
    """Uniform random heading every step."""
    name: str = "random"

    def act(self, state: EpisodeState, cfg: EnvConfig, rng: np.random.Generator) -> float:
        return float(rng.uniform(0.0, 2.0 * math.pi))


@dataclass
class ScriptedPolicy:
    """Replays a fixed heading list, holding the last heading afterwards."""
    headings: Sequence[float]
    name: str = "scripted"

    def act(self, state: EpisodeState, cfg: EnvConfig, rng: np.random.Generator) -> float:
        if not self.headings:
            return 0.0
        return float(self.headings[min(state.t, len(self.headings) - 1)])


@dataclass
class OrbitPolicy:
    """Circles true target ``target_index`` at ``radius``, counter-clockwise.

    Each step heads for the point on the circle one step-length of arc
    ahead of the robot's current angle, which also pulls the robot onto
    the circle from elsewhere.
    """
    radius: float = 1.0
    target_index: int = 0
    name: str = "orbit"

    def act(self, state: EpisodeState, cfg: EnvConfig, rng: np.random.Generator) -> float:
        q = state.q[self.target_index]
        if state.p == q:
            return 0.0
        theta = bearing_to(q, state.p)
        arc = 2.0 * math.asin(min(1.0, cfg.delta_p / (2.0 * self.radius)))
        goal = Point2(q.x + self.radius * math.cos(theta + arc), q.y + self.radius * math.sin(theta + arc))
        if goal == state.p:
            return 0.0
        return bearing_to(state.p, goal) % (2.0 * math.pi)


def policy_from_spec(spec: str, actions: int = DEFAULT_ACTIONS, samples: int = DEFAULT_GREEDY_SAMPLES) -> Policy:
    """Build a policy from a CLI spec: offline, greedy, random or rl:CHECKPOINT."""
    from ..rl.checkpoint import load_checkpoint

    if spec == "offline":
        return OfflineFisherPolicy(ActionSet(actions))
    if spec == "greedy":
        return GreedyLocalPolicy(ActionSet(actions), samples)
    if spec == "random":
        return RandomPolicy()
    if spec.startswith("rl:"):
        ckpt = load_checkpoint(spec[3:])
        return ActorPolicy(ckpt.actor)
    raise ValueError(f"unknown policy '{spec}' (expected offline, greedy, random or rl:CHECKPOINT)")
