"""Tests for active_localize.uncertainty module."""

import math

import numpy as np
import pytest

from active_localize.errors import DegenerateGeometryError, UnboundedUncertaintyError
from active_localize.geometry import MeasurementModel, Point2
from active_localize.uncertainty import (
    Fim2x2,
    fim_accumulate,
    fim_det_bearing_closed_form,
    fim_uncertainty,
    gdop,
    measurement_gradients,
    target_uncertainty,
    total_uncertainty,
    uncertainty_ellipse_axes,
)


def _random_config(rng, n):
    q = Point2(*rng.uniform(5, 15, size=2))
    P = []
    while len(P) < n:
        p = Point2(*rng.uniform(0, 20, size=2))
        if math.hypot(p.x - q.x, p.y - q.y) > 0.5:
            P.append(p)
    return P, q


def _finite_difference_fim(P, q, model, h=1e-5):
    """Fisher matrix from central-difference Jacobians of the reading map."""
    def readings(x, y):
        return np.array([model.true_value(p, Point2(x, y)) for p in P])

    jx = (readings(q.x + h, q.y) - readings(q.x - h, q.y)) / (2 * h)
    jy = (readings(q.x, q.y + h) - readings(q.x, q.y - h)) / (2 * h)
    J = np.column_stack((jx, jy))
    return J.T @ J / model.variance


class TestFimAccumulate:
    """Tests for fim_accumulate."""

    def test_single_bearing_is_rank_one(self):
        F = fim_accumulate([Point2(3, 0)], Point2(0, 0), MeasurementModel.bearing(1.0))
        assert F.det == pytest.approx(0.0, abs=1e-15)
        assert F.is_singular()

    def test_single_reading_off_axis_is_singular(self):
        F = fim_accumulate([Point2(3, 1)], Point2(0, 0), MeasurementModel.bearing())
        assert F.is_singular()

    def test_strong_reading_keeps_matrix_invertible(self):
        """A large reading added to an invertible but elongated matrix stays finite and shrinks det(F^-1)."""
        F = Fim2x2(1.0, 0.0, 1e-6)
        G = Fim2x2(1e7, 0.0, 0.0)
        assert not F.is_singular()
        assert not (F + G).is_singular()
        assert fim_uncertainty(F + G) <= fim_uncertainty(F)

    def test_orthogonal_unit_pair(self):
        F = fim_accumulate([Point2(1, 0), Point2(0, 1)], Point2(0, 0), MeasurementModel.bearing(1.0))
        assert F.det == pytest.approx(1.0)

    def test_empty_is_zero(self):
        F = fim_accumulate([], Point2(0, 0), MeasurementModel.bearing())
        assert F == Fim2x2()

    def test_sensor_on_target_raises(self):
        with pytest.raises(DegenerateGeometryError):
            fim_accumulate([Point2(1, 1)], Point2(1, 1), MeasurementModel.range())

    @pytest.mark.parametrize("model", [MeasurementModel.bearing(0.2), MeasurementModel.range(1.0)])
    def test_matches_finite_difference_oracle(self, model):
        rng = np.random.default_rng(11)
        for _ in range(50):
            P, q = _random_config(rng, 5)
            F = fim_accumulate(P, q, model).as_array()
            oracle = _finite_difference_fim(P, q, model)
            np.testing.assert_allclose(F, oracle, rtol=1e-5, atol=1e-8)

    def test_positive_semidefinite(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            P, q = _random_config(rng, int(rng.integers(1, 7)))
            F = fim_accumulate(P, q, MeasurementModel.bearing())
            assert F.a11 >= 0 and F.a22 >= 0
            assert F.det >= -1e-12 * F.trace ** 2

    def test_gradients_are_perpendicular_for_bearing(self):
        """Bearing gradient is orthogonal to the sensor-target ray."""
        P, q = [Point2(0, 0)], Point2(3, 4)
        g = measurement_gradients(P, q, MeasurementModel.bearing())[0]
        assert float(np.dot(g, [3, 4])) == pytest.approx(0.0, abs=1e-12)
        assert float(np.linalg.norm(g)) == pytest.approx(1 / 5)


class TestClosedFormDeterminant:
    """Tests for fim_det_bearing_closed_form."""

    def test_collinear_is_zero(self):
        assert fim_det_bearing_closed_form([Point2(1, 0), Point2(2, 0)], Point2(0, 0), 1.0) == pytest.approx(0.0)

    def test_orthogonal_pair(self):
        assert fim_det_bearing_closed_form([Point2(1, 0), Point2(0, 1)], Point2(0, 0), 1.0) == pytest.approx(1.0)

    def test_fewer_than_two_is_zero(self):
        assert fim_det_bearing_closed_form([Point2(1, 0)], Point2(0, 0), 1.0) == 0.0
        assert fim_det_bearing_closed_form([], Point2(0, 0), 1.0) == 0.0

    def test_matches_accumulated_determinant(self):
        """1000 random 2-6 reading configurations agree to 1e-9 relative."""
        rng = np.random.default_rng(2024)
        model = MeasurementModel.bearing(0.2)
        for _ in range(1000):
            P, q = _random_config(rng, int(rng.integers(2, 7)))
            F = fim_accumulate(P, q, model)
            closed = fim_det_bearing_closed_form(P, q, model.variance)
            assert closed == pytest.approx(F.det, rel=1e-9, abs=1e-13 * F.trace ** 2)
            F_fd = _finite_difference_fim(P, q, model)
            oracle = np.linalg.det(F_fd)
            assert closed == pytest.approx(oracle, rel=1e-5, abs=1e-7 * np.trace(F_fd) ** 2)


class TestEllipseAxes:
    """Tests for uncertainty_ellipse_axes."""

    def test_identity(self):
        assert uncertainty_ellipse_axes(Fim2x2(1, 0, 1)) == pytest.approx((1.0, 1.0))

    def test_diagonal(self):
        assert uncertainty_ellipse_axes(Fim2x2(4, 0, 1)) == pytest.approx((1.0, 0.5))

    def test_singular_raises(self):
        with pytest.raises(UnboundedUncertaintyError):
            uncertainty_ellipse_axes(Fim2x2(1, 1, 1))

    def test_matches_eigendecomposition(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            A = rng.normal(size=(2, 2))
            M = A @ A.T + 0.1 * np.eye(2)
            F = Fim2x2(M[0, 0], M[0, 1], M[1, 1])
            expected = np.sort(np.sqrt(np.linalg.eigvalsh(np.linalg.inv(M))))[::-1]
            np.testing.assert_allclose(F.axes(), expected, rtol=1e-9)


class TestTotalUncertainty:
    """Tests for total_uncertainty and target_uncertainty."""

    P = [Point2(1, 0), Point2(0, 1)]

    def test_orthogonal_pair(self):
        assert total_uncertainty(self.P, [Point2(0, 0)], MeasurementModel.bearing(1.0)) == pytest.approx(1.0)

    def test_additive_over_targets(self):
        assert total_uncertainty(self.P, [Point2(0, 0)] * 2, MeasurementModel.bearing(1.0)) == pytest.approx(2.0)

    def test_single_reading_is_infinite(self):
        assert total_uncertainty([Point2(1, 0)], [Point2(0, 0)], MeasurementModel.bearing()) == math.inf
        assert target_uncertainty([Point2(1, 0)], Point2(0, 0), MeasurementModel.range()) == math.inf

    def test_monotone_along_growing_trajectories(self):
        """Adding readings never increases total uncertainty."""
        rng = np.random.default_rng(99)
        model = MeasurementModel.bearing()
        for _ in range(100):
            targets = [Point2(*rng.uniform(2, 18, size=2)) for _ in range(2)]
            P: list[Point2] = []
            last = math.inf
            for _ in range(12):
                P.append(Point2(*rng.uniform(0, 20, size=2)))
                u = total_uncertainty(P, targets, model)
                assert u <= last * (1 + 1e-9) or last == math.inf
                last = u


class TestGdop:
    """Tests for gdop."""

    def test_orthogonal_unit(self):
        assert gdop(Point2(1, 0), Point2(0, 1), Point2(0, 0)) == pytest.approx(1.0)

    def test_collinear_is_infinite(self):
        assert gdop(Point2(1, 0), Point2(2, 0), Point2(0, 0)) == math.inf

    def test_identity_with_determinant(self):
        """det(F) = 1 / (sigma^4 gdop^2) for any sensor pair."""
        rng = np.random.default_rng(8)
        sigma = 0.2
        model = MeasurementModel.bearing(sigma)
        for _ in range(500):
            (p_i, p_j), q = _random_config(rng, 2)
            g = gdop(p_i, p_j, q)
            if not math.isfinite(g):
                continue
            F = fim_accumulate([p_i, p_j], q, model)
            assert F.det == pytest.approx(1.0 / (sigma ** 4 * g * g), rel=1e-9, abs=1e-13 * F.trace ** 2)
