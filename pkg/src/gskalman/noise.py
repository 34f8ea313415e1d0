"""Noise models for the benchmark scenarios: Gaussian, Gaussian mixtures,
alpha-stable, and Rayleigh.

The alpha-stable sampler uses the Chambers-Mallows-Stuck construction, with
the skew sign chosen so samples match the characteristic function

    E[exp(jkX)] = exp(j w k - d |k|^a (1 + j b sign(k) tan(a pi / 2)))

(for a != 1), where ``d`` is the dispersion (scale^a) and ``w`` the location.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class Gaussian:
    mean: float
    variance: float

    def __post_init__(self):
        if self.variance < 0.0:
            raise InputError("variance must be nonnegative")


@dataclass(frozen=True)
class Mixture:
    """Finite Gaussian mixture given as (probability, mean, variance) triples."""

    components: Tuple[Tuple[float, float, float], ...]

    def __post_init__(self):
        comps = tuple(tuple(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        probs = np.array([c[0] for c in comps])
        if np.any(probs <= 0.0):
            raise InputError("mixture probabilities must be positive")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise InputError(f"mixture probabilities sum to {probs.sum()}, not 1")
        if any(c[2] < 0.0 for c in comps):
            raise InputError("mixture variances must be nonnegative")


@dataclass(frozen=True)
class AlphaStable:
    """Stability ``alpha`` in (0, 2], skew ``beta`` in [-1, 1], dispersion
    ``delta`` >= 0, location ``omega``."""

    alpha: float
    beta: float
    delta: float
    omega: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise InputError("alpha must lie in (0, 2]")
        if not -1.0 <= self.beta <= 1.0:
            raise InputError("beta must lie in [-1, 1]")
        if self.delta < 0.0:
            raise InputError("dispersion must be nonnegative")


@dataclass(frozen=True)
class Rayleigh:
    tau: float

    def __post_init__(self):
        if not self.tau > 0.0:
            raise InputError("tau must be strictly positive")


NoiseSpec = Union[Gaussian, Mixture, AlphaStable, Rayleigh]


def _sample_stable_standard(alpha: float, beta: float, count: int, rng) -> np.ndarray:
    """Chambers-Mallows-Stuck draw of a standard stable variate (unit scale,
    zero location) in the S parameterization."""
    u = rng.uniform(-np.pi / 2.0, np.pi / 2.0, count)
    w = rng.exponential(1.0, count)
    if alpha == 1.0:
        bu = np.pi / 2.0 + beta * u
        x = (2.0 / np.pi) * (
            bu * np.tan(u) - beta * np.log((np.pi / 2.0) * w * np.cos(u) / bu)
        )
        return x
    t = beta * np.tan(np.pi * alpha / 2.0)
    b0 = np.arctan(t) / alpha
    s0 = (1.0 + t * t) ** (1.0 / (2.0 * alpha))
    x = (
        s0
        * np.sin(alpha * (u + b0))
        / np.cos(u) ** (1.0 / alpha)
        * (np.cos(u - alpha * (u + b0)) / w) ** ((1.0 - alpha) / alpha)
    )
    return x


def sample_noise(spec: NoiseSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` iid samples from the spec using the supplied generator."""
    if count < 0:
        raise InputError("count must be nonnegative")
    if isinstance(spec, Gaussian):
        return rng.normal(spec.mean, np.sqrt(spec.variance), count)
    if isinstance(spec, Mixture):
        probs = np.array([c[0] for c in spec.components])
        means = np.array([c[1] for c in spec.components])
        stds = np.sqrt([c[2] for c in spec.components])
        idx = rng.choice(len(probs), size=count, p=probs)
        return rng.normal(means[idx], stds[idx])
    if isinstance(spec, AlphaStable):
        if spec.delta == 0.0:
            return np.full(count, spec.omega)
        # Flipped skew: the CMS S-parameterization carries -j*beta*tan(...)
        # in its characteristic exponent, the target form carries +j*beta.
        z = _sample_stable_standard(spec.alpha, -spec.beta, count, rng)
        return spec.omega + spec.delta ** (1.0 / spec.alpha) * z
    if isinstance(spec, Rayleigh):
        u = 1.0 - rng.random(count)
        return spec.tau * np.sqrt(-2.0 * np.log(u))
    raise InputError(f"unknown noise spec {spec!r}")


def stable_char_fn(spec: AlphaStable, k: np.ndarray) -> np.ndarray:
    """Target characteristic function of the alpha-stable spec on grid ``k``."""
    k = np.asarray(k, dtype=float)
    if spec.alpha == 1.0:
        skew = (2.0 / np.pi) * np.log(np.abs(k))
    else:
        skew = np.tan(spec.alpha * np.pi / 2.0)
    exponent = (
        1j * spec.omega * k
        - spec.delta
        * np.abs(k) ** spec.alpha
        * (1.0 + 1j * spec.beta * np.sign(k) * skew)
    )
    return np.exp(exponent)


@dataclass(frozen=True)
class Scenario:
    """Named measurement-noise scenario plus the nominal per-vertex measurement
    variance handed to the filters (the true R is never told to them)."""

    name: str
    measurement: NoiseSpec
    nominal_r: float


SCENARIOS = {
    "caseA1": Scenario("caseA1", Gaussian(0.0, 1.0), 1.0),
    "caseA100": Scenario("caseA100", Gaussian(0.0, 100.0), 100.0),
    "caseB1": Scenario(
        "caseB1", Mixture(((0.99, 0.0, 10.0), (0.01, 0.0, 10000.0))), 10.0
    ),
    "caseB2": Scenario(
        "caseB2", Mixture(((0.99, -0.1, 10.0), (0.01, 0.1, 10000.0))), 10.0
    ),
    "caseC": Scenario(
        "caseC",
        Mixture(((0.8, 0.0, 1.0), (0.1, 1.0, 1000.0), (0.1, -1.0, 1000.0))),
        1.0,
    ),
    "caseD_stable": Scenario(
        "caseD_stable", AlphaStable(alpha=1.2, beta=1.0, delta=1.0, omega=0.0), 10.0
    ),
    "caseD_rayleigh": Scenario("caseD_rayleigh", Rayleigh(3.0), 10.0),
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise InputError(
            f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}"
        ) from None
