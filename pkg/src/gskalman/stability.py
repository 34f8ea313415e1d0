"""Error-dynamics construction and discrete Lyapunov fixed point.

For a converged gain K and linearized transition F (both in the spectral
domain) the estimation-error recursion is xi_i = A xi_{i-1} + noise with

    A = (I - K H) F
    B = (I - K H) Q (I - K H)^T + K R K^T

and, when A is Schur stable, the steady-state error covariance solves the
discrete Lyapunov equation ``delta = A delta A^T + B``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, UnstableDynamicsError


@dataclass(frozen=True)
class ErrorDynamics:
    a_mat: np.ndarray
    b_mat: np.ndarray


def finite_difference_jacobian(fn, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian for models without an analytic one."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    jac = np.empty((n, n))
    for k in range(n):
        dx = np.zeros(n)
        dx[k] = h
        jac[:, k] = (np.asarray(fn(x + dx)) - np.asarray(fn(x - dx))) / (2.0 * h)
    return jac


def error_dynamics(
    f_jacobian_v: np.ndarray,
    h_v: np.ndarray,
    k_gain: np.ndarray,
    q_v: np.ndarray,
    r_v: np.ndarray,
) -> ErrorDynamics:
    """Build (A, B) from the linearized maps and gain.

    The gain-noise term enters with a plus sign: both noise sources are
    independent, so their covariance contributions add.
    """
    n = f_jacobian_v.shape[0]
    for name, m in (
        ("f_jacobian_v", f_jacobian_v),
        ("h_v", h_v),
        ("k_gain", k_gain),
        ("q_v", q_v),
        ("r_v", r_v),
    ):
        if np.asarray(m).shape != (n, n):
            raise ShapeError(f"{name} must be {n}x{n}, got {np.asarray(m).shape}")
    ikh = np.eye(n) - k_gain @ h_v
    a = ikh @ f_jacobian_v
    b = ikh @ q_v @ ikh.T + k_gain @ r_v @ k_gain.T
    return ErrorDynamics(a_mat=a, b_mat=0.5 * (b + b.T))


def spectral_radius(a_mat: np.ndarray) -> float:
    """Largest eigenvalue magnitude."""
    return float(np.abs(np.linalg.eigvals(np.asarray(a_mat, dtype=float))).max())


def solve_lyapunov(dynamics: ErrorDynamics) -> np.ndarray:
    """Solve ``delta = A delta A^T + B`` by Kronecker vectorization.

    Uses vec(A delta A^T) = (A kron A) vec(delta) under column stacking, so
    vec(delta) = (I - A kron A)^-1 vec(B).  Requires spectral radius < 1.
    """
    a, b = dynamics.a_mat, dynamics.b_mat
    if spectral_radius(a) >= 1.0:
        raise UnstableDynamicsError(
            f"spectral radius {spectral_radius(a):.6g} >= 1; no fixed point"
        )
    n = a.shape[0]
    lhs = np.eye(n * n) - np.kron(a, a)
    # Column-stacking vec: matrix M maps to M.flatten(order="F").
    vec_b = b.flatten(order="F")
    delta = np.linalg.solve(lhs, vec_b).reshape((n, n), order="F")
    return 0.5 * (delta + delta.T)
