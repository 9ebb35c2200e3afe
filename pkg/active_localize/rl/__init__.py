"""Small numpy TD3 for heading selection.

Shared value types live here; networks, buffer, agent, state builder,
rewards, trainer and checkpoints live in the submodules.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from typing import Any


class RewardKind(Enum):
    """Which reward the trainer optimizes."""

    MULTIMODAL = "multimodal"  # -mean squared MAP error
    IMAGE = "image"  # -mean belief-image intensity


@dataclass
class Td3Config:
    """TD3 hyperparameters.

    Common TD3 defaults, not tuned for this environment.
    """
    gamma: float = 0.99
    tau: float = 0.005
    actor_lr: float = 3e-4
    critic_lr: float = 3e-4
    batch_size: int = 256
    policy_delay: int = 2
    target_noise: float = 0.2
    noise_clip: float = 0.5
    exploration_noise: float = 0.1
    buffer_capacity: int = 100_000
    episodes: int = 2000
    hidden: list[int] = field(default_factory=lambda: [128, 128])
    start_steps: int = 1000
    reward: RewardKind = RewardKind.MULTIMODAL

    def validate(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        for name in ("tau", "actor_lr", "critic_lr"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive, got {value}")
        if self.tau > 1.0:
            raise ValueError(f"tau must be at most 1, got {self.tau}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be at least 1, got {self.batch_size}")
        if self.policy_delay < 1:
            raise ValueError(f"policy_delay must be at least 1, got {self.policy_delay}")
        if self.buffer_capacity < self.batch_size:
            raise ValueError("buffer_capacity must be at least batch_size")
        if self.episodes < 0 or self.start_steps < 0:
            raise ValueError("episodes and start_steps must be non-negative")
        for name in ("target_noise", "noise_clip", "exploration_noise"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not self.hidden or any(h < 1 for h in self.hidden):
            raise ValueError(f"hidden layer sizes must be positive, got {self.hidden}")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["reward"] = self.reward.value
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Td3Config:
        known = {f.name for f in fields(cls)}
        kwargs = {k: v for k, v in data.items() if k in known}
        if "reward" in kwargs:
            kwargs["reward"] = RewardKind(kwargs["reward"])
        if "hidden" in kwargs:
            kwargs["hidden"] = [int(h) for h in kwargs["hidden"]]
        return cls(**kwargs)
