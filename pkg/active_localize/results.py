"""
Result persistence for evaluation runs.

All writers are deterministic: rows come out in the order the cells were
evaluated and floats use ``repr``, so the same config and seed give
byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .rl.trainer import EpisodeStats
from .sim.runner import EvaluationResult

RESULTS_HEADER = ["method", "model", "m", "dynamics", "seed", "episode", "final_error"]
CURVE_HEADER = ["method", "model", "m", "dynamics", "t", "mean_error", "std_error"]
LEARNING_HEADER = ["episode", "return", "critic_loss", "actor_loss"]


@dataclass(frozen=True)
class CellKey:
    """One table cell: method x sensor model x target count x dynamics."""
    method: str
    model: str
    m: int
    dynamics: str

    def slug(self) -> str:
        return f"{self.method}_{self.model}_m{self.m}_{self.dynamics}"


@dataclass
class CellResult:
    key: CellKey
    evaluation: EvaluationResult

    def summary(self) -> dict[str, Any]:
        return {
            "method": self.key.method,
            "model": self.key.model,
            "m": self.key.m,
            "dynamics": self.key.dynamics,
            "n": self.evaluation.n,
            "mean": self.evaluation.mean_error,
            "std": self.evaluation.std_error,
        }


def _fmt(v: float | None) -> str:
    return "" if v is None else repr(float(v))


def _open_writer(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    handle = path.open("w", encoding="utf-8", newline="")
    return handle, csv.writer(handle, lineterminator="\n")


def write_results_csv(path: Path, cells: Iterable[CellResult]) -> Path:
    """One row per evaluated episode."""
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(RESULTS_HEADER)
        for cell in cells:
            k, ev = cell.key, cell.evaluation
            for i, err in enumerate(ev.final_errors):
                writer.writerow([k.method, k.model, k.m, k.dynamics, ev.seed + i, i, _fmt(err)])
    return path


def write_curve_csv(path: Path, cells: Iterable[CellResult]) -> Path:
    """Per-step mean/std localization error for each cell."""
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(CURVE_HEADER)
        for cell in cells:
            k, ev = cell.key, cell.evaluation
            for t, (mean, std) in enumerate(zip(ev.curve_mean, ev.curve_std)):
                writer.writerow([k.method, k.model, k.m, k.dynamics, t, _fmt(mean), _fmt(std)])
    return path


def summary_dict(cells: Sequence[CellResult], seed: int) -> dict[str, Any]:
    return {"cells": [c.summary() for c in cells], "seed": seed}


def write_summary_json(path: Path, cells: Sequence[CellResult], seed: int) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(summary_dict(cells, seed), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_learning_curve_csv(path: Path, curve: Iterable[EpisodeStats]) -> Path:
    """Training curve; losses are blank for episodes without an update."""
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(LEARNING_HEADER)
        for s in curve:
            writer.writerow([s.episode, _fmt(s.ret), _fmt(s.critic_loss), _fmt(s.actor_loss)])
    return path


def format_table(cells: Sequence[CellResult]) -> str:
    """Plain-text mean / std table, one line per cell."""
    lines = [f"{'method':<8} {'model':<8} {'m':>3} {'dynamics':<9} {'n':>4} {'mean':>8} {'std':>8}"]
    for c in cells:
        k, ev = c.key, c.evaluation
        lines.append(
            f"{k.method:<8} {k.model:<8} {k.m:>3} {k.dynamics:<9} {ev.n:>4} "
            f"{ev.mean_error:>8.3f} {ev.std_error:>8.3f}"
        )
    return "\n".join(lines)
