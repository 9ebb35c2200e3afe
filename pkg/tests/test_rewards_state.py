"""Tests for active_localize.rl.rewards and active_localize.rl.state."""

import math

import numpy as np
import pytest

from active_localize.geometry import Extent, Measurement, Point2, SensorKind
from active_localize.histogram import BeliefImage, BeliefStack, aggregate_image
from active_localize.rl.rewards import reward_image, reward_multimodal
from active_localize.rl.state import build_state_multimodal, state_dim

EXT = Extent()


class TestRewardMultimodal:
    """Tests for reward_multimodal."""

    def test_perfect_prediction(self):
        q = [Point2(1, 2), Point2(3, 4)]
        assert reward_multimodal(q, q) == 0.0

    def test_single_target(self):
        assert reward_multimodal([Point2(3, 4)], [Point2(0, 0)]) == pytest.approx(-25.0)

    def test_two_targets(self):
        q = [Point2(1, 0), Point2(0, 2)]
        assert reward_multimodal(q, [Point2(0, 0), Point2(0, 0)]) == pytest.approx(-2.5)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            reward_multimodal([Point2(0, 0)], [])


class TestRewardImage:
    """Tests for reward_image."""

    def test_all_ones(self):
        assert reward_image(BeliefImage(4, 4, np.ones((4, 4)))) == -1.0

    def test_one_hot(self):
        pixels = np.zeros((200, 200))
        pixels[17, 93] = 1.0
        assert reward_image(BeliefImage(200, 200, pixels)) == pytest.approx(-1 / 40000)

    def test_uniform_prior_is_minus_one(self):
        img = aggregate_image(BeliefStack.uniform(3, 50, 50, EXT))
        assert reward_image(img) == pytest.approx(-1.0)


class TestBuildState:
    """Tests for build_state_multimodal."""

    def test_dimensions(self):
        assert state_dim(1) == 5
        assert state_dim(4) == 14
        s = build_state_multimodal(Point2(1, 1), [Measurement(0.1, i) for i in range(4)], [Point2(2, 2)] * 4, EXT)
        assert s.shape == (14,)

    def test_center_maps_to_zero(self):
        s = build_state_multimodal(Point2(10, 10), [Measurement(0.0, 0)], [Point2(10, 10)], EXT)
        np.testing.assert_allclose(s, [0.0, 0.0, 0.0, 0.0, 0.0])

    def test_corners_and_bearing_scaling(self):
        s = build_state_multimodal(Point2(0, 20), [Measurement(math.pi, 0)], [Point2(20, 0)], EXT)
        np.testing.assert_allclose(s, [-1.0, 1.0, 1.0, 1.0, -1.0])

    def test_range_scaling(self):
        reading = Measurement(EXT.diagonal, 0)
        s = build_state_multimodal(Point2(10, 10), [reading], [Point2(10, 10)], EXT, SensorKind.RANGE)
        assert s[2] == pytest.approx(1.0)
        s = build_state_multimodal(Point2(10, 10), [Measurement(0.0, 0)], [Point2(10, 10)], EXT, SensorKind.RANGE)
        assert s[2] == pytest.approx(-1.0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            build_state_multimodal(Point2(1, 1), [Measurement(0.1, 0)], [], EXT)
