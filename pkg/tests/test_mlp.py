"""Tests for active_localize.rl.mlp module."""

import numpy as np
import pytest

from active_localize.rl.mlp import AdamState, Mlp, adam_step, mlp_backward, mlp_forward, soft_update


def _numeric_gradients(net, x, upstream, h=1e-6):
    """Central differences of sum(upstream * net(x)) for every parameter and the input."""
    def loss():
        return float(np.sum(upstream * mlp_forward(net, x)))

    grads = []
    for p in net.parameters():
        g = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            up = loss()
            p[idx] = old - h
            down = loss()
            p[idx] = old
            g[idx] = (up - down) / (2 * h)
        grads.append(g)
    gx = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        old = x[idx]
        x[idx] = old + h
        up = loss()
        x[idx] = old - h
        down = loss()
        x[idx] = old
        gx[idx] = (up - down) / (2 * h)
    return grads, gx


def _rel_error(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a) + np.linalg.norm(b), 1e-12))


class TestMlp:
    """Tests for Mlp construction and forward passes."""

    def test_create_shapes(self):
        net = Mlp.create([5, 8, 3], np.random.default_rng(0))
        assert [w.shape for w in net.weights] == [(5, 8), (8, 3)]
        assert [b.shape for b in net.biases] == [(8,), (3,)]
        assert net.parameter_count() == 5 * 8 + 8 + 8 * 3 + 3

    def test_bad_shapes_rejected(self):
        with pytest.raises(ValueError):
            Mlp((2, 3), [np.zeros((3, 2))], [np.zeros(3)])

    def test_zero_weights_output_bias(self):
        net = Mlp.zeros([4, 6, 2])
        net.biases[-1][:] = [0.25, -1.5]
        out = mlp_forward(net, np.array([1.0, -2.0, 3.0, 0.5]))
        np.testing.assert_array_equal(out, [0.25, -1.5])

    def test_batch_matches_rows(self):
        net = Mlp.create([3, 7, 7, 2], np.random.default_rng(1))
        x = np.random.default_rng(2).normal(size=(5, 3))
        batch = mlp_forward(net, x)
        for i in range(5):
            np.testing.assert_allclose(batch[i], mlp_forward(net, x[i]))

    def test_wrong_input_size(self):
        net = Mlp.create([3, 2], np.random.default_rng(0))
        with pytest.raises(ValueError):
            mlp_forward(net, np.zeros(4))

    def test_copy_is_independent(self):
        net = Mlp.create([2, 3, 1], np.random.default_rng(0))
        clone = net.copy()
        clone.weights[0][0, 0] += 1.0
        assert net.weights[0][0, 0] != clone.weights[0][0, 0]


class TestBackward:
    """Analytic gradients against central differences."""

    def test_gradient_check_random_networks(self):
        rng = np.random.default_rng(123)
        worst = 0.0
        for _ in range(100):
            depth = int(rng.integers(1, 4))
            sizes = [int(rng.integers(1, 6)) for _ in range(depth + 1)]
            net = Mlp.create(sizes, rng)
            batch = int(rng.integers(1, 4))
            x = rng.normal(size=(batch, sizes[0]))
            upstream = rng.normal(size=(batch, sizes[-1]))
            analytic = mlp_backward(net, x, upstream)
            numeric, numeric_x = _numeric_gradients(net, x, upstream)
            for a, n in zip(analytic.params, numeric):
                worst = max(worst, _rel_error(a, n))
            worst = max(worst, _rel_error(analytic.inputs, numeric_x))
        assert worst < 1e-4

    def test_single_sample_gradient_shapes(self):
        net = Mlp.create([3, 4, 2], np.random.default_rng(0))
        g = mlp_backward(net, np.ones(3), np.ones(2))
        assert [p.shape for p in g.params] == [p.shape for p in net.parameters()]
        assert g.inputs.shape == (3,)

    def test_upstream_shape_checked(self):
        net = Mlp.create([3, 2], np.random.default_rng(0))
        with pytest.raises(ValueError):
            mlp_backward(net, np.ones(3), np.ones(3))


class TestAdam:
    """Tests for adam_step."""

    def test_first_step_moves_by_lr_against_sign(self):
        p = [np.array([1.0, -2.0, 0.5])]
        g = [np.array([0.3, -4.0, 1e-3])]
        state = AdamState.for_params(p)
        before = p[0].copy()
        adam_step(p, g, state, lr=0.01)
        np.testing.assert_allclose(p[0] - before, -0.01 * np.sign(g[0]), rtol=1e-4)
        assert state.t == 1

    def test_zero_gradient_leaves_params(self):
        p = [np.array([1.0, 2.0])]
        state = AdamState.for_params(p)
        adam_step(p, [np.zeros(2)], state, lr=0.1)
        np.testing.assert_array_equal(p[0], [1.0, 2.0])

    def test_minimizes_quadratic(self):
        p = [np.array([3.0, -2.0])]
        state = AdamState.for_params(p)
        for _ in range(2000):
            adam_step(p, [2 * p[0]], state, lr=0.05)
        np.testing.assert_allclose(p[0], [0.0, 0.0], atol=1e-2)

    def test_shape_mismatch(self):
        p = [np.zeros(2)]
        with pytest.raises(ValueError):
            adam_step(p, [np.zeros(3)], AdamState.for_params(p), lr=0.1)


class TestSoftUpdate:
    """Tests for soft_update."""

    def test_tau_one_copies(self):
        rng = np.random.default_rng(0)
        src = Mlp.create([3, 4, 1], rng)
        dst = Mlp.create([3, 4, 1], rng)
        soft_update(dst, src, 1.0)
        for a, b in zip(dst.parameters(), src.parameters()):
            np.testing.assert_array_equal(a, b)

    def test_tau_blends(self):
        src = Mlp.zeros([1, 1])
        dst = Mlp.zeros([1, 1])
        src.weights[0][:] = 1.0
        soft_update(dst, src, 0.25)
        assert dst.weights[0][0, 0] == pytest.approx(0.25)
