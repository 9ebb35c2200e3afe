"""Tests for active_localize.config module."""

import pytest

from active_localize.config import RunConfig, get_defaults_file, load_config, parse_config
from active_localize.errors import ConfigError
from active_localize.geometry import Extent, MeasurementModel
from active_localize.rl import RewardKind
from active_localize.sim import Dynamics


class TestParseConfig:
    """Tests for parse_config and load_config."""

    def test_empty_text_gives_defaults(self):
        cfg = parse_config("")
        assert cfg == RunConfig()
        assert cfg.env.extent == Extent(0, 0, 20, 20)
        assert cfg.env.delta_p == 0.5
        assert cfg.env.horizon == 50
        assert cfg.env.model == MeasurementModel.bearing(0.2)
        assert (cfg.env.grid_w, cfg.env.grid_h) == (200, 200)

    def test_shipped_defaults_match_builtin(self):
        assert load_config(get_defaults_file()) == RunConfig()

    def test_horizon_override(self):
        cfg = parse_config("env:\n  horizon: 10\n")
        assert cfg.env.horizon == 10
        assert cfg.env.delta_p == 0.5
        assert cfg.td3 == RunConfig().td3

    def test_sigma_follows_model(self):
        assert parse_config("env:\n  model: range\n").env.model == MeasurementModel.range(1.0)
        cfg = parse_config("env:\n  model: range\n  sigma: 0.5\n")
        assert cfg.env.model == MeasurementModel.range(0.5)
        assert cfg.sigma == 0.5

    @pytest.mark.parametrize("value", ["0", "0.0", "-0.2"])
    def test_non_positive_sigma_rejected(self, value):
        with pytest.raises(ConfigError) as exc_info:
            parse_config(f"env:\n  sigma: {value}\n")
        assert exc_info.value.key == "env.sigma"

    def test_exponent_without_dot(self):
        """PyYAML loads 3e-4 as a string; it still reads as a number."""
        cfg = parse_config("td3:\n  actor_lr: 3e-4\n  critic_lr: 1e-3\n")
        assert cfg.td3.actor_lr == pytest.approx(3e-4)
        assert cfg.td3.critic_lr == pytest.approx(1e-3)

    @pytest.mark.parametrize("value", ["fast", "nan", "inf"])
    def test_non_numeric_string_rejected(self, value):
        with pytest.raises(ConfigError, match="env.delta_p"):
            parse_config(f"env:\n  delta_p: {value}\n")

    def test_sections(self):
        text = (
            "env:\n  extent: [0, 0, 10, 5]\n  dynamics: brownian\n  brownian_var: 0.2\n"
            "td3:\n  hidden: [64]\n  reward: image\n"
            "planner:\n  actions: 12\n"
            "tables:\n  targets: [6, 12]\n"
            "run:\n  seed: 7\n  episodes: 5\n  out_dir: out\n  workers: 3\n"
        )
        cfg = parse_config(text)
        assert cfg.env.extent == Extent(0, 0, 10, 5)
        assert cfg.env.dynamics is Dynamics.BROWNIAN
        assert cfg.env.brownian_cov == ((0.2, 0.0), (0.0, 0.2))
        assert cfg.td3.hidden == [64]
        assert cfg.td3.reward is RewardKind.IMAGE
        assert cfg.planner.actions == 12
        assert cfg.tables.targets == [6, 12]
        assert (cfg.seed, cfg.n_episodes, cfg.out_dir, cfg.workers) == (7, 5, "out", 3)

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="env.horizn") as exc_info:
            parse_config("env:\n  horizn: 10\n")
        assert exc_info.value.key == "env.horizn"

    def test_unknown_section(self):
        with pytest.raises(ConfigError) as exc_info:
            parse_config("envv:\n  horizon: 10\n")
        assert exc_info.value.key == "envv"

    def test_wrong_type_named(self):
        with pytest.raises(ConfigError, match="run.seed"):
            parse_config("run:\n  seed: seven\n")

    def test_bad_choice(self):
        with pytest.raises(ConfigError, match="env.model"):
            parse_config("env:\n  model: sonar\n")

    def test_syntax_error_has_position(self):
        with pytest.raises(ConfigError) as exc_info:
            parse_config("env:\n  horizon: [10\n")
        assert exc_info.value.line is not None
        assert exc_info.value.column is not None
        assert exc_info.value.line >= 2

    def test_non_mapping(self):
        with pytest.raises(ConfigError):
            parse_config("- a\n- b\n")

    def test_invalid_value_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("env:\n  delta_p: -1\n")
        with pytest.raises(ConfigError):
            parse_config("planner:\n  actions: 2\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.yaml")


class TestOverrides:
    """Tests for RunConfig.with_overrides and env_for."""

    def test_flags_override_file(self):
        cfg = parse_config("run:\n  seed: 3\nenv:\n  targets: 2\n")
        cfg = cfg.with_overrides(seed=9, targets=4, model="range", dynamics="brownian", episodes=7)
        assert cfg.seed == 9
        assert cfg.n_episodes == 7
        assert cfg.env.m == 4
        assert cfg.env.model == MeasurementModel.range(1.0)
        assert cfg.env.dynamics is Dynamics.BROWNIAN

    def test_none_keeps_values(self):
        cfg = RunConfig()
        assert cfg.with_overrides() == cfg

    def test_env_for_cell(self):
        env = RunConfig().env_for("range", 6, "brownian")
        assert env.m == 6
        assert env.model == MeasurementModel.range()
        assert env.dynamics is Dynamics.BROWNIAN

    def test_explicit_sigma_survives_model_switch(self):
        cfg = parse_config("env:\n  sigma: 0.05\n")
        assert cfg.with_overrides(model="range").env.model == MeasurementModel.range(0.05)
        assert cfg.env_for("range", 2, "static").model == MeasurementModel.range(0.05)
