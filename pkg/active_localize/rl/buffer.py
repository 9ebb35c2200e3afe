"""Fixed-capacity FIFO transition store."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Batch:
    """A sampled mini-batch; ``actions`` are headings in radians."""
    states: np.ndarray
    actions: np.ndarray
    next_states: np.ndarray
    rewards: np.ndarray
    dones: np.ndarray

    def __len__(self) -> int:
        return len(self.rewards)


class ReplayBuffer:
    """Ring buffer of (s, a, s', r, y) transitions; oldest entries are evicted first."""

    def __init__(self, capacity: int, state_dim: int) -> None:
        if capacity < 1:
            raise ValueError(f"capacity must be at least 1, got {capacity}")
        self.capacity = capacity
        self.state_dim = state_dim
        self._states = np.zeros((capacity, state_dim))
        self._actions = np.zeros(capacity)
        self._next_states = np.zeros((capacity, state_dim))
        self._rewards = np.zeros(capacity)
        self._dones = np.zeros(capacity)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def add(self, state: np.ndarray, action: float, next_state: np.ndarray, reward: float, done: bool) -> None:
        i = self._next
        self._states[i] = state
        self._actions[i] = action
        self._next_states[i] = next_state
        self._rewards[i] = reward
        self._dones[i] = 1.0 if done else 0.0
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        """Uniform sample with replacement."""
        if self._size == 0:
            raise ValueError("cannot sample from an empty replay buffer")
        idx = rng.integers(0, self._size, size=batch_size)
        return Batch(
            states=self._states[idx],
            actions=self._actions[idx],
            next_states=self._next_states[idx],
            rewards=self._rewards[idx],
            dones=self._dones[idx],
        )
