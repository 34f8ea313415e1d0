"""Error dynamics, spectral radius, and the discrete Lyapunov fixed point."""
import numpy as np
import pytest

from gskalman.errors import ShapeError, UnstableDynamicsError
from gskalman.stability import (
    ErrorDynamics,
    error_dynamics,
    finite_difference_jacobian,
    solve_lyapunov,
    spectral_radius,
)


class TestErrorDynamics:
    def test_zero_gain(self):
        f = np.array([[0.5, 0.1], [0.0, 0.4]])
        q = np.diag([1.0, 2.0])
        dyn = error_dynamics(f, np.eye(2), np.zeros((2, 2)), q, np.eye(2))
        assert np.allclose(dyn.a_mat, f)
        assert np.allclose(dyn.b_mat, q)

    def test_identity_gain_identity_h(self):
        dyn = error_dynamics(
            0.5 * np.eye(2), np.eye(2), np.eye(2), np.eye(2), 3.0 * np.eye(2)
        )
        assert np.allclose(dyn.a_mat, 0.0)
        assert np.allclose(dyn.b_mat, 3.0 * np.eye(2))

    def test_scalar_hand_computation(self):
        # f = 0.5 x, h = x, k = 0.5, q = r = 1:
        # A = (1 - 0.5) 0.5 = 0.25, B = 0.25 + 0.25 = 0.5.
        dyn = error_dynamics(
            np.array([[0.5]]),
            np.array([[1.0]]),
            np.array([[0.5]]),
            np.array([[1.0]]),
            np.array([[1.0]]),
        )
        assert np.isclose(dyn.a_mat[0, 0], 0.25)
        assert np.isclose(dyn.b_mat[0, 0], 0.5)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            error_dynamics(np.eye(2), np.eye(3), np.eye(2), np.eye(2), np.eye(2))


class TestSpectralRadius:
    def test_identity(self):
        assert spectral_radius(np.eye(4)) == 1.0

    def test_diagonal(self):
        assert np.isclose(spectral_radius(np.diag([0.3, -0.9])), 0.9)

    def test_random_vs_eigensolve(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            a = rng.normal(size=(5, 5))
            expect = np.abs(np.linalg.eigvals(a)).max()
            assert np.isclose(spectral_radius(a), expect, atol=1e-8)


class TestLyapunov:
    def test_zero_dynamics(self):
        b = np.diag([1.0, 2.0])
        delta = solve_lyapunov(ErrorDynamics(np.zeros((2, 2)), b))
        assert np.allclose(delta, b)

    def test_scalar_geometric_series(self):
        delta = solve_lyapunov(ErrorDynamics(np.array([[0.5]]), np.array([[1.0]])))
        assert np.isclose(delta[0, 0], 4.0 / 3.0, atol=1e-12)

    def test_unstable_rejected(self):
        with pytest.raises(UnstableDynamicsError):
            solve_lyapunov(ErrorDynamics(1.1 * np.eye(2), np.eye(2)))

    @pytest.mark.parametrize("seed", range(20))
    def test_vec_formula_vs_fixed_point_iteration(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 9))
        a = rng.normal(size=(n, n))
        a *= 0.9 / max(spectral_radius(a), 1e-12)
        m = rng.normal(size=(n, n))
        b = m @ m.T + 0.1 * np.eye(n)
        dyn = ErrorDynamics(a, b)
        delta = solve_lyapunov(dyn)
        # Independent solver: iterate the map to its fixed point.
        it = np.zeros_like(b)
        for _ in range(5000):
            nxt = a @ it @ a.T + b
            if np.abs(nxt - it).max() < 1e-13 * max(1.0, np.abs(nxt).max()):
                it = nxt
                break
            it = nxt
        scale = max(1.0, np.abs(delta).max())
        assert np.abs(delta - it).max() <= 1e-8 * scale
        residual = np.abs(delta - a @ delta @ a.T - b).max()
        assert residual <= 1e-8 * scale


class TestFiniteDifferenceJacobian:
    def test_linear_map(self):
        m = np.array([[1.0, 2.0], [3.0, 4.0]])
        jac = finite_difference_jacobian(lambda x: m @ x, np.zeros(2))
        assert np.allclose(jac, m, atol=1e-8)

    def test_benchmark_transition(self):
        from gskalman.models import benchmark_f, benchmark_f_jacobian

        x = np.array([0.4, -1.3, 2.2])
        jac = finite_difference_jacobian(lambda v: benchmark_f(v, 3), x)
        assert np.allclose(jac, benchmark_f_jacobian(x), atol=1e-6)
