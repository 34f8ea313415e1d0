"""State-space model abstraction and the benchmark nonlinear system.

The benchmark transition acts elementwise on each vertex:

    f_k(x) = x/2 + 25 x / (1 + x^2) + 8 cos(1.2 (i - 1))

and the measurement map is

    h_k(x) = x + phi sin(x) + phi / (x + x^2)

with the denominator clamped to magnitude >= 1e-6 (sign preserved) to guard
the poles at x = 0 and x = -1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InputError, ShapeError
from .noise import NoiseSpec, sample_noise

#: Magnitude floor for the measurement denominator x + x^2.
H_DENOM_FLOOR = 1e-6


@dataclass(frozen=True)
class StateSpaceModel:
    """Nonlinear state-space model with additive noise.

    ``f(x, i)`` maps the state at step ``i-1`` to step ``i``; ``h(x)`` maps a
    state to a measurement of the same dimension.  ``q_cov`` is the process
    noise covariance; ``r_cov_nominal`` is the measurement covariance the
    filter assumes (not necessarily the covariance of the real noise).
    """

    n: int
    f: Callable[[np.ndarray, int], np.ndarray]
    h: Callable[[np.ndarray], np.ndarray]
    q_cov: np.ndarray
    r_cov_nominal: np.ndarray

    def __post_init__(self):
        for name in ("q_cov", "r_cov_nominal"):
            m = np.asarray(getattr(self, name), dtype=float)
            if m.shape != (self.n, self.n):
                raise ShapeError(f"{name} must be {self.n}x{self.n}, got {m.shape}")
            if not np.allclose(m, m.T, atol=1e-10):
                raise ShapeError(f"{name} must be symmetric")
            object.__setattr__(self, name, m)


def benchmark_f(x: np.ndarray, i: int) -> np.ndarray:
    """Elementwise benchmark transition at time index ``i`` (i >= 1)."""
    x = np.asarray(x, dtype=float)
    return 0.5 * x + 25.0 * x / (1.0 + x * x) + 8.0 * np.cos(1.2 * (i - 1))


def benchmark_f_jacobian(x: np.ndarray) -> np.ndarray:
    """Analytic Jacobian of the benchmark transition (diagonal matrix)."""
    x = np.asarray(x, dtype=float)
    d = 0.5 + 25.0 * (1.0 - x * x) / (1.0 + x * x) ** 2
    return np.diag(d)


def benchmark_h(x: np.ndarray, phi: float) -> np.ndarray:
    """Elementwise benchmark measurement map with singularity guard."""
    x = np.asarray(x, dtype=float)
    g = x + x * x
    sign = np.where(g >= 0.0, 1.0, -1.0)
    g_safe = sign * np.maximum(np.abs(g), H_DENOM_FLOOR)
    return x + phi * np.sin(x) + phi / g_safe


def benchmark_model(
    n: int, phi: float = 1.0, q_var: float = 0.01, r_var: float = 10.0
) -> StateSpaceModel:
    """Benchmark system with Q = q_var*I and nominal filter R = r_var*I."""
    return StateSpaceModel(
        n=n,
        f=benchmark_f,
        h=lambda x: benchmark_h(x, phi),
        q_cov=q_var * np.eye(n),
        r_cov_nominal=r_var * np.eye(n),
    )


def benchmark_initial_state(n: int) -> np.ndarray:
    """True initial state: component k (1-based) equals 0.5*k."""
    return 0.5 * np.arange(1, n + 1, dtype=float)


@dataclass(frozen=True)
class Trajectory:
    """Simulated truth and measurements, one row per step (step 1..D)."""

    states: np.ndarray
    measurements: np.ndarray
    seed: int

    def __post_init__(self):
        if self.states.shape != self.measurements.shape:
            raise ShapeError("states and measurements must have equal shapes")

    @property
    def d_steps(self) -> int:
        return self.states.shape[0]


def simulate_trajectory(
    model: StateSpaceModel,
    process_noise: NoiseSpec,
    meas_noise: NoiseSpec,
    x0: np.ndarray,
    d_steps: int,
    seed: int,
) -> Trajectory:
    """Iterate the model forward D steps with iid per-vertex noise samples."""
    if d_steps < 1:
        raise InputError("need at least one step")
    rng = np.random.default_rng(seed)
    x = np.asarray(x0, dtype=float).copy()
    states = np.empty((d_steps, model.n))
    measurements = np.empty((d_steps, model.n))
    for i in range(1, d_steps + 1):
        x = model.f(x, i) + sample_noise(process_noise, model.n, rng)
        states[i - 1] = x
        measurements[i - 1] = model.h(x) + sample_noise(meas_noise, model.n, rng)
    return Trajectory(states=states, measurements=measurements, seed=seed)
