"""Fully connected tanh networks with analytic gradients, plus Adam."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass
class Mlp:
    """Multilayer perceptron: tanh hidden layers, linear output.

    ``weights[i]`` has shape (sizes[i], sizes[i+1]); inputs are row
    vectors or (batch, sizes[0]) matrices.
    """
    sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def __post_init__(self) -> None:
        if len(self.sizes) < 2:
            raise ValueError(f"network needs input and output sizes, got {self.sizes}")
        expected = len(self.sizes) - 1
        if len(self.weights) != expected or len(self.biases) != expected:
            raise ValueError(f"expected {expected} layers, got {len(self.weights)} weights / {len(self.biases)} biases")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (self.sizes[i], self.sizes[i + 1]) or b.shape != (self.sizes[i + 1],):
                raise ValueError(f"layer {i} has shapes {w.shape}/{b.shape}, sizes say {self.sizes[i]}->{self.sizes[i + 1]}")

    @classmethod
    def create(cls, sizes: Sequence[int], rng: np.random.Generator) -> Mlp:
        """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization."""
        sizes = tuple(int(s) for s in sizes)
        weights, biases = [], []
        for n_in, n_out in zip(sizes, sizes[1:]):
            bound = 1.0 / np.sqrt(n_in)
            weights.append(rng.uniform(-bound, bound, size=(n_in, n_out)))
            biases.append(rng.uniform(-bound, bound, size=n_out))
        return cls(sizes, weights, biases)

    @classmethod
    def zeros(cls, sizes: Sequence[int]) -> Mlp:
        sizes = tuple(int(s) for s in sizes)
        return cls(
            sizes,
            [np.zeros((a, b)) for a, b in zip(sizes, sizes[1:])],
            [np.zeros(b) for b in sizes[1:]],
        )

    @property
    def input_size(self) -> int:
        return self.sizes[0]

    @property
    def output_size(self) -> int:
        return self.sizes[-1]

    def parameters(self) -> list[np.ndarray]:
        """Parameter arrays in [W0, b0, W1, b1, ...] order (live references)."""
        out: list[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def copy(self) -> Mlp:
        return Mlp(self.sizes, [w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters())

    def forward(self, x: np.ndarray) -> np.ndarray:
        return mlp_forward(self, x)


@dataclass
class ForwardCache:
    """Layer activations kept for the backward pass."""
    activations: list[np.ndarray]


@dataclass
class Gradients:
    """Parameter gradients in :meth:`Mlp.parameters` order, and the input gradient."""
    params: list[np.ndarray]
    inputs: np.ndarray


def _check_input(net: Mlp, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != net.input_size:
        raise ValueError(f"input has dimension {x.shape[-1]}, network expects {net.input_size}")
    return x


def forward_cached(net: Mlp, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    a = _check_input(net, x)
    acts = [a]
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w + b
        a = z if i == last else np.tanh(z)
        acts.append(a)
    return a, ForwardCache(acts)


def mlp_forward(net: Mlp, x: np.ndarray) -> np.ndarray:
    return forward_cached(net, x)[0]


def backward_cached(net: Mlp, cache: ForwardCache, upstream: np.ndarray) -> Gradients:
    """Backpropagate ``upstream`` (dL/d output) through a cached forward pass."""
    acts = cache.activations
    delta = np.asarray(upstream, dtype=float)
    if delta.shape != acts[-1].shape:
        raise ValueError(f"upstream gradient shape {delta.shape} does not match output {acts[-1].shape}")
    last = len(net.weights) - 1
    grads: list[np.ndarray] = [np.empty(0)] * (2 * len(net.weights))
    for i in range(last, -1, -1):
        if i != last:
            delta = delta * (1.0 - acts[i + 1] ** 2)
        a_in = acts[i]
        if a_in.ndim == 1:
            grads[2 * i] = np.outer(a_in, delta)
            grads[2 * i + 1] = delta.copy()
        else:
            grads[2 * i] = a_in.T @ delta
            grads[2 * i + 1] = delta.sum(axis=0)
        delta = delta @ net.weights[i].T
    return Gradients(grads, delta)


def mlp_backward(net: Mlp, x: np.ndarray, upstream: np.ndarray) -> Gradients:
    _, cache = forward_cached(net, x)
    return backward_cached(net, cache, upstream)


@dataclass
class AdamState:
    """First/second moment estimates and the step counter."""
    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_params(cls, params: Sequence[np.ndarray], **kwargs: float) -> AdamState:
        return cls([np.zeros_like(p) for p in params], [np.zeros_like(p) for p in params], **kwargs)


def adam_step(
    params: Sequence[np.ndarray], grads: Sequence[np.ndarray], state: AdamState, lr: float
) -> Sequence[np.ndarray]:
    """One bias-corrected Adam step, applied to ``params`` in place."""
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ValueError("params, grads and optimizer state must have the same length")
    state.t += 1
    c1 = 1.0 - state.beta1 ** state.t
    c2 = 1.0 - state.beta2 ** state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape:
            raise ValueError(f"gradient shape {g.shape} does not match parameter {p.shape}")
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        p -= lr * (m / c1) / (np.sqrt(v / c2) + state.eps)
    return params


def soft_update(target: Mlp, source: Mlp, tau: float) -> None:
    """Blend target <- tau * source + (1 - tau) * target, in place."""
    for t, s in zip(target.parameters(), source.parameters()):
        t *= 1.0 - tau
        t += tau * s
