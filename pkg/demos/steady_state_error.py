"""Steady-state error covariance of a fixed-gain filter, two ways.

Builds linear error dynamics xi_next = (I - K H) F xi + noise, solves the
discrete Lyapunov equation for the stationary covariance, and checks the
answer against a brute-force Monte Carlo simulation of the same recursion.

    python3 demos/steady_state_error.py
"""
import numpy as np

from gskalman import ErrorDynamics, error_dynamics, solve_lyapunov, spectral_radius

n = 5
rng = np.random.default_rng(0)

f_mat = 0.8 * np.eye(n) + 0.15 * np.diag(np.ones(n - 1), 1)
h_mat = np.eye(n)
k_gain = 0.4 * np.eye(n)
q = 0.05 * np.eye(n)
r = 0.2 * np.eye(n)

dyn = error_dynamics(f_mat, h_mat, k_gain, q, r)
rho = spectral_radius(dyn.a_mat)
print(f"closed-loop spectral radius: {rho:.4f} (stable, so a fixed point exists)")

delta = solve_lyapunov(dyn)
print("Lyapunov steady-state error variances:")
print("  " + " ".join(f"{d:7.4f}" for d in np.diag(delta)))

# Brute force: run the error recursion to stationarity many times and look at
# the spread of the final errors.
trials, steps = 2000, 120
ikh = np.eye(n) - k_gain @ h_mat
finals = np.empty((trials, n))
for t in range(trials):
    xi = np.zeros(n)
    for _ in range(steps):
        w = rng.normal(0.0, np.sqrt(0.05), n)
        v = rng.normal(0.0, np.sqrt(0.2), n)
        xi = dyn.a_mat @ xi + ikh @ w - k_gain @ v
    finals[t] = xi

print("Monte Carlo error variances (2000 runs):")
print("  " + " ".join(f"{d:7.4f}" for d in finals.var(axis=0)))

residual = np.abs(delta - dyn.a_mat @ delta @ dyn.a_mat.T - dyn.b_mat).max()
print(f"Lyapunov residual |delta - A delta A' - B|_max = {residual:.2e}")
