"""
Run configuration for active-localize.

Loads a sectioned YAML file (``env``, ``td3``, ``planner``, ``tables``,
``run``). Every key is optional and falls back to the evaluation
defaults; unknown keys are rejected.

Example config file:
---
env:
  model: range
  targets: 4
  horizon: 50
planner:
  actions: 36
run:
  seed: 7
  episodes: 100
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

try:
    import yaml
except ImportError:
    yaml = None  # type: ignore

from .errors import ConfigError
from .geometry import Extent, MeasurementModel, SensorKind
from .planners import DEFAULT_ACTIONS, DEFAULT_GREEDY_SAMPLES
from .rl import RewardKind, Td3Config
from .sim import Dynamics, EnvConfig


def get_defaults_file() -> Path:
    """Path of the shipped, fully commented default configuration."""
    return Path(__file__).parent / "defaults" / "run.yaml"


def _require_yaml() -> None:
    """Raise error if PyYAML not installed."""
    if yaml is None:
        raise RuntimeError(
            "PyYAML is required for config loading.\n"
            "Install with: pip install pyyaml"
        )


@dataclass
class PlannerConfig:
    """Discretization of the baseline planners."""
    actions: int = DEFAULT_ACTIONS
    greedy_samples: int = DEFAULT_GREEDY_SAMPLES


@dataclass
class TablesConfig:
    """The grid of cells the ``tables`` command evaluates."""
    methods: list[str] = field(default_factory=lambda: ["offline", "greedy"])
    models: list[str] = field(default_factory=lambda: ["bearing", "range"])
    targets: list[int] = field(default_factory=lambda: [2, 4, 8])
    dynamics: list[str] = field(default_factory=lambda: ["static", "brownian"])
    heatmap: bool = True


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""
    env: EnvConfig = field(default_factory=EnvConfig)
    td3: Td3Config = field(default_factory=Td3Config)
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    tables: TablesConfig = field(default_factory=TablesConfig)
    seed: int = 0
    n_episodes: int = 100
    out_dir: str = "results"
    workers: int = 1
    # sigma given explicitly; None means "default for the model"
    sigma: float | None = None

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        episodes: int | None = None,
        model: str | None = None,
        targets: int | None = None,
        dynamics: str | None = None,
        out: str | None = None,
        workers: int | None = None,
    ) -> RunConfig:
        """Copy with CLI flag values applied on top of the file values."""
        env = self.env
        if model is not None:
            kind = SensorKind(model)
            env = dataclasses.replace(env, model=MeasurementModel.for_kind(kind, self.sigma))
        if targets is not None:
            env = dataclasses.replace(env, m=targets)
        if dynamics is not None:
            env = dataclasses.replace(env, dynamics=Dynamics(dynamics))
        return dataclasses.replace(
            self,
            env=env,
            seed=self.seed if seed is None else seed,
            n_episodes=self.n_episodes if episodes is None else episodes,
            out_dir=self.out_dir if out is None else out,
            workers=self.workers if workers is None else workers,
        )

    def env_for(self, model: str, m: int, dynamics: str) -> EnvConfig:
        """The configured environment with one table cell's settings."""
        kind = SensorKind(model)
        return dataclasses.replace(
            self.env,
            model=MeasurementModel.for_kind(kind, self.sigma),
            m=m,
            dynamics=Dynamics(dynamics),
        )


# ---------------------------------------------------------------------------
# Value conversion
# ---------------------------------------------------------------------------

def _as_int(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError("expected an integer")
    return v


def _as_float(v: Any) -> float:
    if isinstance(v, str):
        # PyYAML reads exponents without a dot (3e-4) as strings.
        try:
            f = float(v)
        except ValueError:
            raise TypeError("expected a number") from None
        if not math.isfinite(f):
            raise TypeError("expected a finite number")
        return f
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise TypeError("expected a number")
    return float(v)


def _as_sigma(v: Any) -> float:
    sigma = _as_float(v)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return sigma


def _as_bool(v: Any) -> bool:
    if not isinstance(v, bool):
        raise TypeError("expected true or false")
    return v


def _as_str(v: Any) -> str:
    if not isinstance(v, str):
        raise TypeError("expected a string")
    return v


def _choice(*options: str) -> Callable[[Any], str]:
    def convert(v: Any) -> str:
        v = _as_str(v)
        if v not in options:
            raise TypeError(f"expected one of {', '.join(options)}")
        return v
    return convert


def _list_of(item: Callable[[Any], Any]) -> Callable[[Any], list[Any]]:
    def convert(v: Any) -> list[Any]:
        if not isinstance(v, list):
            raise TypeError("expected a list")
        return [item(x) for x in v]
    return convert


def _as_extent(v: Any) -> Extent:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return Extent.square(float(v))
    coords = _list_of(_as_float)(v)
    if len(coords) != 4:
        raise TypeError("expected a size or [xmin, ymin, xmax, ymax]")
    return Extent(*coords)


_MODEL = _choice("bearing", "range")
_DYNAMICS = _choice("static", "brownian")
_METHOD = _choice("offline", "greedy", "random")

# section -> key -> converter
_SCHEMA: dict[str, dict[str, Callable[[Any], Any]]] = {
    "env": {
        "extent": _as_extent,
        "delta_p": _as_float,
        "horizon": _as_int,
        "model": _MODEL,
        "sigma": _as_sigma,
        "targets": _as_int,
        "dynamics": _DYNAMICS,
        "brownian_var": _as_float,
        "grid_w": _as_int,
        "grid_h": _as_int,
        "image_w": _as_int,
        "image_h": _as_int,
        "target_margin": _as_float,
        "min_separation": _as_float,
    },
    "td3": {
        "gamma": _as_float,
        "tau": _as_float,
        "actor_lr": _as_float,
        "critic_lr": _as_float,
        "batch_size": _as_int,
        "policy_delay": _as_int,
        "target_noise": _as_float,
        "noise_clip": _as_float,
        "exploration_noise": _as_float,
        "buffer_capacity": _as_int,
        "episodes": _as_int,
        "hidden": _list_of(_as_int),
        "start_steps": _as_int,
        "reward": _choice("multimodal", "image"),
    },
    "planner": {
        "actions": _as_int,
        "greedy_samples": _as_int,
    },
    "tables": {
        "methods": _list_of(_METHOD),
        "models": _list_of(_MODEL),
        "targets": _list_of(_as_int),
        "dynamics": _list_of(_DYNAMICS),
        "heatmap": _as_bool,
    },
    "run": {
        "seed": _as_int,
        "episodes": _as_int,
        "out_dir": _as_str,
        "workers": _as_int,
    },
}


def _convert(data: dict[str, Any]) -> dict[str, dict[str, Any]]:
    """Check keys and types, returning converted values per section."""
    out: dict[str, dict[str, Any]] = {name: {} for name in _SCHEMA}
    for section, body in data.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section '{section}'", key=str(section))
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError(f"config section '{section}' must be a mapping", key=str(section))
        for key, value in body.items():
            dotted = f"{section}.{key}"
            convert = _SCHEMA[section].get(key)
            if convert is None:
                raise ConfigError(f"unknown config key '{dotted}'", key=dotted)
            try:
                out[section][key] = convert(value)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"invalid value for '{dotted}': {e}", key=dotted) from e
    return out


def _build(values: dict[str, dict[str, Any]]) -> RunConfig:
    env_v = values["env"]
    base = EnvConfig()
    kind = SensorKind(env_v.get("model", base.model.kind.value))
    sigma = env_v.get("sigma")
    var = env_v.get("brownian_var", base.brownian_cov[0][0])
    env = EnvConfig(
        extent=env_v.get("extent", base.extent),
        delta_p=env_v.get("delta_p", base.delta_p),
        horizon=env_v.get("horizon", base.horizon),
        model=MeasurementModel.for_kind(kind, sigma),
        m=env_v.get("targets", base.m),
        dynamics=Dynamics(env_v.get("dynamics", base.dynamics.value)),
        brownian_cov=((var, 0.0), (0.0, var)),
        grid_w=env_v.get("grid_w", base.grid_w),
        grid_h=env_v.get("grid_h", base.grid_h),
        image_w=env_v.get("image_w"),
        image_h=env_v.get("image_h"),
        target_margin=env_v.get("target_margin", base.target_margin),
        min_separation=env_v.get("min_separation", base.min_separation),
    )

    td3_v = dict(values["td3"])
    if "reward" in td3_v:
        td3_v["reward"] = RewardKind(td3_v["reward"])
    td3 = Td3Config(**td3_v)

    run_v = values["run"]
    defaults = RunConfig()
    cfg = RunConfig(
        env=env,
        td3=td3,
        planner=PlannerConfig(**values["planner"]),
        tables=TablesConfig(**values["tables"]),
        seed=run_v.get("seed", defaults.seed),
        n_episodes=run_v.get("episodes", defaults.n_episodes),
        out_dir=run_v.get("out_dir", defaults.out_dir),
        workers=run_v.get("workers", defaults.workers),
        sigma=sigma,
    )
    try:
        cfg.env.validate()
        cfg.td3.validate()
    except ValueError as e:
        raise ConfigError(str(e)) from e
    if cfg.planner.actions < 4 or cfg.planner.greedy_samples < 1:
        raise ConfigError("planner.actions must be >= 4 and planner.greedy_samples >= 1")
    return cfg


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    """Parse configuration text; empty text yields all defaults."""
    _require_yaml()
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark
        line = mark.line + 1 if mark is not None else None
        column = mark.column + 1 if mark is not None else None
        raise ConfigError(f"{source}:{line}:{column}: {e.problem}", line=line, column=column) from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{source}: {e}") from e
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: config must be a YAML mapping, got {type(data).__name__}")
    return _build(_convert(data))


def load_config(path: Path | str) -> RunConfig:
    """Load a configuration file; see the module docstring for the layout."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config(text, source=str(path))
