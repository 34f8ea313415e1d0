"""Robust loss family, IRLS weight functions, and diagonal weight assembly.

The two-parameter general robust loss

    phi(c) = (|b - 2| / b) * (((c/g)^2 / |b - 2| + 1)^(b/2) - 1)

interpolates quadratic (b = 2), Cauchy/log (b = 0) and Welsch/exponential
(b -> -inf) behavior; the singular parameter values are handled by their
analytic limit branches.  Huber and Cauchy are provided in their own
conventional parameterizations.  IRLS weights are phi'(c)/c, normalized so the
weight at zero residual is exactly 1 for every variant; with that
normalization the unit loss (weight identically 1) reproduces the non-robust
filter exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InputError, ShapeError

#: |beta| below this is evaluated on the log-loss limit branch.
BETA_ZERO_TOL = 1e-6
#: |beta - 2| below this is evaluated on the quadratic limit branch.
BETA_TWO_TOL = 1e-6
#: beta at or below this is evaluated on the exponential (Welsch) limit branch.
BETA_WELSCH_CUTOFF = -1e6


@dataclass(frozen=True)
class GeneralRobustLoss:
    """Shape factor ``beta`` (any real) and scale ``gamma`` > 0."""

    beta: float
    gamma: float

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise InputError("gamma must be strictly positive")


@dataclass(frozen=True)
class HuberLoss:
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise InputError("sigma must be strictly positive")


@dataclass(frozen=True)
class CauchyLoss:
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise InputError("sigma must be strictly positive")


@dataclass(frozen=True)
class UnitLoss:
    """Quadratic loss; IRLS weight identically 1 (non-robust filter)."""


LossSpec = Union[GeneralRobustLoss, HuberLoss, CauchyLoss, UnitLoss]


def loss_value(spec: LossSpec, c: float) -> float:
    """Evaluate the loss at a scalar residual."""
    if not np.isfinite(c):
        raise InputError(f"residual must be finite, got {c}")
    if isinstance(spec, UnitLoss):
        return 0.5 * c * c
    if isinstance(spec, HuberLoss):
        a = abs(c)
        if a < spec.sigma:
            return 0.5 * c * c
        return spec.sigma * a - 0.5 * spec.sigma**2
    if isinstance(spec, CauchyLoss):
        return 0.5 * spec.sigma**2 * np.log1p(c * c / spec.sigma)
    beta, gamma = spec.beta, spec.gamma
    x = (c / gamma) ** 2
    if abs(beta - 2.0) < BETA_TWO_TOL:
        return 0.5 * x
    if beta <= BETA_WELSCH_CUTOFF:
        return 1.0 - np.exp(-0.5 * x)
    if abs(beta) < BETA_ZERO_TOL:
        return np.log1p(0.5 * x)
    b2 = abs(beta - 2.0)
    return (b2 / beta) * ((x / b2 + 1.0) ** (beta / 2.0) - 1.0)


def raw_weight(spec: LossSpec, c: float) -> float:
    """Unnormalized IRLS weight phi'(c)/c, with the c -> 0 limit at zero."""
    if isinstance(spec, UnitLoss):
        return 1.0
    if isinstance(spec, HuberLoss):
        a = abs(c)
        return 1.0 if a < spec.sigma else spec.sigma / a
    if isinstance(spec, CauchyLoss):
        return spec.sigma / (1.0 + c * c / spec.sigma)
    beta, gamma = spec.beta, spec.gamma
    x = (c / gamma) ** 2
    if abs(beta - 2.0) < BETA_TWO_TOL:
        return gamma**-2
    if beta <= BETA_WELSCH_CUTOFF:
        return gamma**-2 * np.exp(-0.5 * x)
    if abs(beta) < BETA_ZERO_TOL:
        return gamma**-2 / (0.5 * x + 1.0)
    return gamma**-2 * (x / abs(beta - 2.0) + 1.0) ** (beta / 2.0 - 1.0)


def weight_at_zero(spec: LossSpec) -> float:
    """Normalization constant: the raw weight at zero residual."""
    return raw_weight(spec, 0.0)


def weight(spec: LossSpec, c: float) -> float:
    """Normalized IRLS weight with ``weight(spec, 0) == 1`` for every variant."""
    return raw_weight(spec, c) / weight_at_zero(spec)


@dataclass(frozen=True)
class WeightMatrix:
    """Diagonal IRLS weights split into state (``xi_x``) and measurement (``xi_y``) blocks."""

    xi_x: np.ndarray
    xi_y: np.ndarray

    def diagonal(self) -> np.ndarray:
        """Stacked 2n diagonal of the block weight matrix."""
        return np.concatenate([self.xi_x, self.xi_y])


def _raw_weight_array(spec: LossSpec, c: np.ndarray) -> np.ndarray:
    """Vectorized ``raw_weight`` over a residual array."""
    if isinstance(spec, UnitLoss):
        return np.ones_like(c)
    if isinstance(spec, HuberLoss):
        a = np.abs(c)
        return np.where(a < spec.sigma, 1.0, spec.sigma / np.maximum(a, spec.sigma))
    if isinstance(spec, CauchyLoss):
        return spec.sigma / (1.0 + c * c / spec.sigma)
    beta, gamma = spec.beta, spec.gamma
    x = (c / gamma) ** 2
    if abs(beta - 2.0) < BETA_TWO_TOL:
        return np.full_like(c, gamma**-2)
    if beta <= BETA_WELSCH_CUTOFF:
        return gamma**-2 * np.exp(-0.5 * x)
    if abs(beta) < BETA_ZERO_TOL:
        return gamma**-2 / (0.5 * x + 1.0)
    return gamma**-2 * (x / abs(beta - 2.0) + 1.0) ** (beta / 2.0 - 1.0)


def build_weight_matrix(spec: LossSpec, e: np.ndarray) -> WeightMatrix:
    """Elementwise weights for a stacked residual of state and measurement halves."""
    e = np.asarray(e, dtype=float)
    if e.ndim != 1 or e.shape[0] % 2 != 0:
        raise ShapeError(f"residual must be a vector of even length, got shape {e.shape}")
    n = e.shape[0] // 2
    if isinstance(spec, UnitLoss):
        return WeightMatrix(xi_x=np.ones(n), xi_y=np.ones(n))
    vals = _raw_weight_array(spec, e) / weight_at_zero(spec)
    return WeightMatrix(xi_x=vals[:n], xi_y=vals[n:])
