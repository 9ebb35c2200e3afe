"""Episode records and their JSON Lines form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

from ..geometry import Measurement, Point2

if TYPE_CHECKING:
    from . import EpisodeState


@dataclass
class StepRecord:
    """Snapshot after step ``t``; ``heading`` is None for the initial state."""
    t: int
    p: Point2
    heading: float | None
    measurements: tuple[Measurement, ...]
    targets: tuple[Point2, ...]
    predictions: tuple[Point2, ...]
    error: float
    reward_multimodal: float | None = None
    reward_image: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "p": self.p.to_list(),
            "heading": self.heading,
            "measurements": [m.to_dict() for m in self.measurements],
            "targets": [q.to_list() for q in self.targets],
            "predictions": [q.to_list() for q in self.predictions],
            "error": self.error,
            "reward_multimodal": self.reward_multimodal,
            "reward_image": self.reward_image,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> StepRecord:
        return cls(
            t=int(data["t"]),
            p=Point2.from_list(data["p"]),
            heading=data.get("heading"),
            measurements=tuple(Measurement(m["value"], m["target"]) for m in data.get("measurements", [])),
            targets=tuple(Point2.from_list(q) for q in data.get("targets", [])),
            predictions=tuple(Point2.from_list(q) for q in data.get("predictions", [])),
            error=float(data["error"]),
            reward_multimodal=data.get("reward_multimodal"),
            reward_image=data.get("reward_image"),
        )


@dataclass
class EpisodeRecord:
    """Everything one episode produced, initial state first."""
    policy: str
    seed: int
    steps: list[StepRecord] = field(default_factory=list)
    # last environment state, kept in memory only
    final: EpisodeState | None = field(default=None, repr=False, compare=False)

    @property
    def trajectory(self) -> list[Point2]:
        return [s.p for s in self.steps]

    @property
    def errors(self) -> list[float]:
        return [s.error for s in self.steps]

    @property
    def final_error(self) -> float:
        return self.steps[-1].error

    @property
    def returns(self) -> tuple[float, float]:
        """Undiscounted (multimodal, image) returns."""
        mm = sum(s.reward_multimodal or 0.0 for s in self.steps)
        im = sum(s.reward_image or 0.0 for s in self.steps)
        return mm, im

    def to_lines(self) -> list[str]:
        return [json.dumps(s.to_dict(), sort_keys=True) for s in self.steps]


def write_episode_jsonl(record: EpisodeRecord, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(record.to_lines()) + "\n", encoding="utf-8")
    return path


def read_episode_jsonl(path: Path, policy: str = "", seed: int = 0) -> EpisodeRecord:
    steps = [
        StepRecord.from_dict(json.loads(line))
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    return EpisodeRecord(policy=policy, seed=seed, steps=steps)
