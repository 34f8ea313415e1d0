"""Benchmark system maps and trajectory simulation."""
import numpy as np
import pytest

from gskalman.errors import InputError, ShapeError
from gskalman.models import (
    StateSpaceModel,
    benchmark_f,
    benchmark_f_jacobian,
    benchmark_h,
    benchmark_initial_state,
    benchmark_model,
    simulate_trajectory,
)
from gskalman.noise import Gaussian


class TestTransition:
    def test_zero_state_first_step(self):
        out = benchmark_f(np.zeros(4), 1)
        assert np.allclose(out, 8.0, atol=1e-14)

    def test_unit_state_first_step(self):
        # 0.5 + 25/2 + 8 cos(0) = 21.
        out = benchmark_f(np.ones(3), 1)
        assert np.allclose(out, 21.0, atol=1e-14)

    def test_elementwise_permutation_equivariance(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=6)
        perm = rng.permutation(6)
        assert np.allclose(benchmark_f(x, 5)[perm], benchmark_f(x[perm], 5))

    def test_jacobian_matches_finite_differences(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=5)
        jac = benchmark_f_jacobian(x)
        h = 1e-6
        for k in range(5):
            dx = np.zeros(5)
            dx[k] = h
            col = (benchmark_f(x + dx, 2) - benchmark_f(x - dx, 2)) / (2 * h)
            assert np.allclose(jac[:, k], col, atol=1e-6)


class TestMeasurement:
    def test_phi_zero_is_identity(self):
        x = np.array([0.3, -2.0, 5.0])
        assert np.array_equal(benchmark_h(x, 0.0), x)

    def test_unit_state(self):
        out = benchmark_h(np.array([1.0]), 1.0)
        assert np.isclose(out[0], 1.0 + np.sin(1.0) + 0.5, atol=1e-12)
        assert np.isclose(out[0], 2.3414709848078965, atol=1e-12)

    def test_pole_clamped(self):
        for x0 in (0.0, -1.0, 1e-9):
            out = benchmark_h(np.array([x0]), 1.0)
            assert np.isfinite(out[0])
            assert abs(out[0]) <= 1.0 / 1e-6 + 10.0

    def test_clamp_preserves_sign(self):
        # Just left of zero, x + x^2 is small and negative.
        out_neg = benchmark_h(np.array([-1e-9]), 1.0)
        out_pos = benchmark_h(np.array([1e-9]), 1.0)
        assert out_neg[0] < 0 < out_pos[0]


class TestModelFactory:
    def test_covariances(self):
        model = benchmark_model(4, phi=1.0, q_var=0.01, r_var=10.0)
        assert np.array_equal(model.q_cov, 0.01 * np.eye(4))
        assert np.array_equal(model.r_cov_nominal, 10.0 * np.eye(4))

    def test_initial_state(self):
        assert np.array_equal(
            benchmark_initial_state(4), [0.5, 1.0, 1.5, 2.0]
        )

    def test_asymmetric_covariance_rejected(self):
        bad = np.eye(2)
        bad[0, 1] = 0.5
        with pytest.raises(ShapeError):
            StateSpaceModel(
                n=2,
                f=lambda x, i: x,
                h=lambda x: x,
                q_cov=bad,
                r_cov_nominal=np.eye(2),
            )


class TestSimulation:
    def test_shapes(self):
        model = benchmark_model(3)
        traj = simulate_trajectory(
            model, Gaussian(0.0, 0.01), Gaussian(0.0, 1.0),
            benchmark_initial_state(3), 20, seed=0,
        )
        assert traj.states.shape == (20, 3)
        assert traj.measurements.shape == (20, 3)
        assert traj.d_steps == 20

    def test_seed_reproducibility(self):
        model = benchmark_model(3)
        args = (model, Gaussian(0.0, 0.01), Gaussian(0.0, 1.0),
                benchmark_initial_state(3), 10)
        a = simulate_trajectory(*args, seed=5)
        b = simulate_trajectory(*args, seed=5)
        assert np.array_equal(a.states, b.states)
        assert np.array_equal(a.measurements, b.measurements)

    def test_noise_free_recursion(self):
        model = benchmark_model(2, phi=1.0)
        x0 = benchmark_initial_state(2)
        traj = simulate_trajectory(
            model, Gaussian(0.0, 0.0), Gaussian(0.0, 0.0), x0, 5, seed=0
        )
        x = x0.copy()
        for i in range(1, 6):
            x = benchmark_f(x, i)
            assert np.allclose(traj.states[i - 1], x, atol=1e-12)
            assert np.allclose(traj.measurements[i - 1], benchmark_h(x, 1.0), atol=1e-12)

    def test_zero_steps_rejected(self):
        model = benchmark_model(2)
        with pytest.raises(InputError):
            simulate_trajectory(
                model, Gaussian(0.0, 0.01), Gaussian(0.0, 1.0),
                benchmark_initial_state(2), 0, seed=0,
            )
