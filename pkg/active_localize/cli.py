#!/usr/bin/env python3
"""
active-localize - Active target localization experiments.

Runs the offline Fisher planner, the greedy entropy planner and a TD3
policy in the simulated localization environment, and writes results
as CSV/JSON plus PGM heatmaps.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config
from .errors import LocalizeError
from .export import HeatmapOverlay, export_heatmap
from .histogram import aggregate_image
from .sim import EnvConfig
from .sim.policies import ActorPolicy, Policy, policy_from_spec
from .sim.records import EpisodeRecord, write_episode_jsonl
from .sim.runner import evaluate, run_episode

logger = logging.getLogger("active-localize.cli")

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def configure_logging(debug: bool) -> None:
    """Send library logs to stderr; INFO by default, DEBUG with --debug."""
    root = logging.getLogger("active-localize")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if debug else logging.INFO)
    root.propagate = False


def _add_run_flags(p: argparse.ArgumentParser, policy: bool = False) -> None:
    p.add_argument("--config", "-c", help="YAML config file (default: built-in defaults)")
    p.add_argument("--seed", type=int, help="Base random seed")
    p.add_argument("--episodes", type=int, help="Number of episodes")
    p.add_argument("--model", choices=["bearing", "range"], help="Sensor model")
    p.add_argument("--targets", type=int, help="Number of targets")
    p.add_argument("--dynamics", choices=["static", "brownian"], help="Target motion")
    p.add_argument("--out", help="Output directory")
    p.add_argument("--workers", type=int, help="Evaluation worker processes")
    if policy:
        p.add_argument("--policy", default="offline", help="offline | greedy | random | rl:CHECKPOINT")


def main() -> int:
    parser = argparse.ArgumentParser(
        prog="active-localize",
        description="Active target localization - planners, TD3 training and evaluation",
    )
    parser.add_argument("--debug", "-d", action="store_true", help="Enable debug output")
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    # plan-offline / plan-greedy
    offline_p = subparsers.add_parser("plan-offline", help="Run one episode with the offline Fisher planner")
    _add_run_flags(offline_p)
    greedy_p = subparsers.add_parser("plan-greedy", help="Run one episode with the greedy entropy planner")
    _add_run_flags(greedy_p)

    # train
    train_p = subparsers.add_parser("train", help="Train a TD3 actor")
    _add_run_flags(train_p)

    # eval
    eval_p = subparsers.add_parser("eval", help="Evaluate a policy over seeded episodes")
    _add_run_flags(eval_p, policy=True)

    # export-heatmap
    heat_p = subparsers.add_parser("export-heatmap", help="Run one episode and export its final belief heatmap")
    _add_run_flags(heat_p, policy=True)

    # tables
    tables_p = subparsers.add_parser("tables", help="Evaluate the method x model x targets x dynamics grid")
    _add_run_flags(tables_p)
    tables_p.add_argument("--checkpoint", help="Also evaluate this trained actor on cells with matching target count")

    args = parser.parse_args()
    configure_logging(args.debug)

    if args.command is None:
        parser.print_help()
        return 0

    handlers = {
        "plan-offline": cmd_plan,
        "plan-greedy": cmd_plan,
        "train": cmd_train,
        "eval": cmd_eval,
        "export-heatmap": cmd_export_heatmap,
        "tables": cmd_tables,
    }
    try:
        return handlers[args.command](args)
    except (LocalizeError, OSError, ValueError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return 1


def _load(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    return cfg.with_overrides(
        seed=args.seed,
        episodes=args.episodes,
        model=args.model,
        targets=args.targets,
        dynamics=args.dynamics,
        out=args.out,
        workers=args.workers,
    )


def _policy(spec: str, cfg: RunConfig) -> Policy:
    return policy_from_spec(spec, cfg.planner.actions, cfg.planner.greedy_samples)


def _export_final(record: EpisodeRecord, env: EnvConfig, path: Path) -> Path:
    state = record.final
    img = aggregate_image(state.stack, *env.image_size)
    overlay = HeatmapOverlay(
        trajectory=list(state.trajectory),
        targets=list(state.q),
        predictions=state.stack.predict_map(),
    )
    return export_heatmap(img, path, overlay, env.extent)


def cmd_plan(args: argparse.Namespace) -> int:
    cfg = _load(args)
    spec = "offline" if args.command == "plan-offline" else "greedy"
    policy = _policy(spec, cfg)
    record = run_episode(policy, cfg.env, np.random.default_rng(cfg.seed), seed=cfg.seed)
    out = Path(cfg.out_dir)
    path = write_episode_jsonl(record, out / f"{spec}_episode.jsonl")
    print(f"[{spec.upper()}] seed {cfg.seed}: final error {record.final_error:.4f}", file=sys.stderr)
    print(f"[WROTE] {path}", file=sys.stderr)
    print(path)
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    import dataclasses

    from .results import write_learning_curve_csv
    from .rl.checkpoint import Checkpoint, save_checkpoint
    from .rl.trainer import train

    cfg = _load(args)
    # --episodes sets the training budget here
    td3 = cfg.td3 if args.episodes is None else dataclasses.replace(cfg.td3, episodes=args.episodes)
    print(f"[TRAIN] {td3.episodes} episodes, m={cfg.env.m}, {cfg.env.model.kind.value}, seed {cfg.seed}",
          file=sys.stderr)
    result = train(cfg.env, td3, cfg.seed)

    out = Path(cfg.out_dir)
    ckpt_path = save_checkpoint(out / "actor.json", Checkpoint(result.actor, td3, cfg.env, cfg.seed))
    curve_path = write_learning_curve_csv(out / "learning_curve.csv", result.curve)
    for path in (ckpt_path, curve_path):
        print(f"[WROTE] {path}", file=sys.stderr)
    print(ckpt_path)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    from .results import CellKey, CellResult, write_curve_csv, write_results_csv, write_summary_json

    cfg = _load(args)
    policy = _policy(args.policy, cfg)
    env = cfg.env
    result = evaluate(policy, env, cfg.n_episodes, cfg.seed, workers=cfg.workers)
    cell = CellResult(CellKey(policy.name, env.model.kind.value, env.m, env.dynamics.value), result)

    out = Path(cfg.out_dir)
    paths = [
        write_results_csv(out / "results.csv", [cell]),
        write_summary_json(out / "summary.json", [cell], cfg.seed),
        write_curve_csv(out / "curves.csv", [cell]),
    ]
    print(f"[EVAL] {policy.name}: mean {result.mean_error:.4f} std {result.std_error:.4f} (n={result.n})",
          file=sys.stderr)
    for path in paths:
        print(f"[WROTE] {path}", file=sys.stderr)
    print(paths[1])
    return 0


def cmd_export_heatmap(args: argparse.Namespace) -> int:
    cfg = _load(args)
    policy = _policy(args.policy, cfg)
    record = run_episode(policy, cfg.env, np.random.default_rng(cfg.seed), seed=cfg.seed)
    path = _export_final(record, cfg.env, Path(cfg.out_dir) / f"heatmap_{policy.name}_seed{cfg.seed}.pgm")
    print(f"[WROTE] {path}", file=sys.stderr)
    print(path)
    return 0


def cmd_tables(args: argparse.Namespace) -> int:
    from .results import (
        CellKey,
        CellResult,
        format_table,
        write_curve_csv,
        write_results_csv,
        write_summary_json,
    )
    from .rl.checkpoint import load_checkpoint

    cfg = _load(args)
    tables = cfg.tables
    models = [args.model] if args.model else tables.models
    targets = [args.targets] if args.targets else tables.targets
    dynamics = [args.dynamics] if args.dynamics else tables.dynamics
    methods: list[tuple[str, Policy]] = [(m, _policy(m, cfg)) for m in tables.methods]
    rl_m = None
    if args.checkpoint:
        ckpt = load_checkpoint(args.checkpoint)
        methods.append(("rl", ActorPolicy(ckpt.actor)))
        rl_m = ckpt.env.m

    out = Path(cfg.out_dir)
    cells: list[CellResult] = []
    for dyn in dynamics:
        for model in models:
            for m in targets:
                env = cfg.env_for(model, m, dyn)
                for name, policy in methods:
                    if name == "rl" and m != rl_m:
                        logger.info("skipping rl on m=%d (checkpoint trained on m=%d)", m, rl_m)
                        continue
                    key = CellKey(name, model, m, dyn)
                    print(f"[TABLES] {key.slug()} ({cfg.n_episodes} episodes)", file=sys.stderr)
                    result = evaluate(policy, env, cfg.n_episodes, cfg.seed, workers=cfg.workers)
                    cells.append(CellResult(key, result))
                    if tables.heatmap:
                        record = run_episode(policy, env, np.random.default_rng(cfg.seed), seed=cfg.seed)
                        _export_final(record, env, out / "heatmaps" / f"{key.slug()}.pgm")

    paths = [
        write_results_csv(out / "results.csv", cells),
        write_summary_json(out / "summary.json", cells, cfg.seed),
        write_curve_csv(out / "curves.csv", cells),
    ]
    print(format_table(cells))
    for path in paths:
        print(f"[WROTE] {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
