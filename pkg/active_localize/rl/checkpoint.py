"""
Actor checkpoints.

A checkpoint is a JSON document:

    {"format": "active-localize-actor", "version": 1,
     "layer_sizes": [...], "params": [[...], ...],
     "td3": {...}, "env": {...}, "seed": N}

``params`` holds W0, b0, W1, b1, ... as nested lists. Floats are written
at full precision, so loading reproduces the actor exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import CheckpointError
from ..sim import EnvConfig
from . import Td3Config
from .mlp import Mlp

FORMAT = "active-localize-actor"
VERSION = 1


@dataclass
class Checkpoint:
    actor: Mlp
    td3: Td3Config
    env: EnvConfig
    seed: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": FORMAT,
            "version": VERSION,
            "layer_sizes": list(self.actor.sizes),
            "params": [p.tolist() for p in self.actor.parameters()],
            "td3": self.td3.to_dict(),
            "env": self.env.to_dict(),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Checkpoint:
        if data.get("format") != FORMAT:
            raise CheckpointError(f"not an actor checkpoint (format={data.get('format')!r})")
        if data.get("version") != VERSION:
            raise CheckpointError(f"unsupported checkpoint version {data.get('version')!r}")
        sizes = tuple(int(s) for s in data["layer_sizes"])
        params = [np.asarray(p, dtype=float) for p in data["params"]]
        try:
            actor = Mlp(sizes, params[0::2], params[1::2])
        except ValueError as e:
            raise CheckpointError(f"checkpoint parameters do not match layer sizes: {e}") from e
        return cls(
            actor=actor,
            td3=Td3Config.from_dict(data.get("td3", {})),
            env=EnvConfig.from_dict(data.get("env", {})),
            seed=int(data.get("seed", 0)),
        )


def save_checkpoint(path: Path | str, ckpt: Checkpoint) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(ckpt.to_dict(), indent=1) + "\n", encoding="utf-8")
    return path


def load_checkpoint(path: Path | str) -> Checkpoint:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
    if not isinstance(data, dict):
        raise CheckpointError(f"checkpoint {path} must hold a JSON object")
    try:
        return Checkpoint.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, CheckpointError):
            raise
        raise CheckpointError(f"malformed checkpoint {path}: {e}") from e
