"""Monte Carlo benchmark harness: configuration, execution, metrics, CSV output.

Each trial simulates one shared trajectory of the benchmark system; every
configured filter consumes the same measurements and the same perturbed
initial estimate (paired comparison).  Per-trial random streams are derived
from the master seed and the trial index only, so results are identical
regardless of how trials are scheduled across workers.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import ConfigError, GsKalmanError, InputError, IoError, ShapeError
from .filters import FILTER_PRESETS, UtParams, preset_config, run_filter
from .graph import (
    ErdosRenyi,
    GraphTopology,
    RandomGeometric,
    Ring,
    build_laplacian,
    eigendecompose,
    generate_topology,
    save_topology,
)
from .models import benchmark_initial_state, benchmark_model, simulate_trajectory
from .noise import Gaussian, get_scenario


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one benchmark run."""

    n: int = 10
    d_steps: int = 100
    m_trials: int = 100
    seed: int = 0
    graph_model: str = "erdos_renyi"
    graph_param: float = 0.5
    graph_seed: Optional[int] = None
    phi: float = 1.0
    q_var: float = 0.01
    init_var: float = 4.0
    noise_scenario: str = "caseB1"
    filters: Tuple[str, ...] = ("ukf", "gsp-ukf", "gsp-gr-srukf")
    gr_beta: float = -1.0
    gr_gamma: float = 1.1
    huber_sigma: float = 1.1
    cauchy_sigma: float = 1.1
    ut_alpha: float = 1.0
    ut_beta: float = 2.0
    ut_kappa: float = 0.0
    nominal_r: Optional[float] = None
    out_dir: str = "results"

    def __post_init__(self):
        if min(self.n, self.d_steps, self.m_trials) < 1:
            raise ConfigError("n, d_steps and m_trials must all be positive")
        object.__setattr__(self, "filters", tuple(self.filters))
        for name in self.filters:
            if name not in FILTER_PRESETS:
                raise ConfigError(f"unknown filter {name!r}")
        get_scenario(self.noise_scenario)

    def resolved_nominal_r(self) -> float:
        if self.nominal_r is not None:
            return self.nominal_r
        return get_scenario(self.noise_scenario).nominal_r

    def ut_params(self) -> UtParams:
        return UtParams(self.ut_alpha, self.ut_beta, self.ut_kappa)


@dataclass(frozen=True)
class RunResult:
    """Aggregated Monte Carlo output."""

    rmse: Dict[str, np.ndarray]
    armse: Dict[str, float]
    failures: Dict[str, int]
    trial_seeds: List[int]
    wall_time: float
    filters: Tuple[str, ...]


def rmse_series(truths: np.ndarray, estimates: np.ndarray) -> np.ndarray:
    """Per-step RMSE over trials: sqrt(mean over trials and vertices of squared error)."""
    truths = np.asarray(truths, dtype=float)
    estimates = np.asarray(estimates, dtype=float)
    if truths.shape != estimates.shape or truths.ndim != 3:
        raise ShapeError(
            f"expected equal M x D x n arrays, got {truths.shape} and {estimates.shape}"
        )
    m, _, n = truths.shape
    sq = np.sum((truths - estimates) ** 2, axis=2)  # M x D
    return np.sqrt(sq.sum(axis=0) / (n * m))


def armse(series: np.ndarray) -> float:
    """Time average of an RMSE series."""
    series = np.asarray(series, dtype=float)
    if series.size == 0:
        raise InputError("empty RMSE series")
    return float(series.mean())


def build_topology(config: ExperimentConfig) -> GraphTopology:
    seed = config.seed if config.graph_seed is None else config.graph_seed
    if config.graph_model == "erdos_renyi":
        model = ErdosRenyi(config.graph_param)
    elif config.graph_model == "ring":
        model = Ring()
    elif config.graph_model == "random_geometric":
        model = RandomGeometric(config.graph_param)
    else:
        raise ConfigError(f"unknown graph model {config.graph_model!r}")
    return generate_topology(config.n, model, seed)


def _trial_seed(master: int, k: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=master, spawn_key=(k,))


def run_trial(
    config: ExperimentConfig, k: int
) -> Tuple[int, np.ndarray, Dict[str, Optional[np.ndarray]]]:
    """Run all configured filters on trial ``k``'s shared trajectory.

    Returns (trial index, truth D x n, per-filter estimates or None on
    numerical failure).
    """
    topology = build_topology(config)
    basis = eigendecompose(build_laplacian(topology))
    model = benchmark_model(
        config.n, config.phi, config.q_var, config.resolved_nominal_r()
    )
    scenario = get_scenario(config.noise_scenario)
    ss = _trial_seed(config.seed, k)
    traj_seed, init_seed = ss.spawn(2)
    x0_true = benchmark_initial_state(config.n)
    traj = simulate_trajectory(
        model,
        Gaussian(0.0, config.q_var),
        scenario.measurement,
        x0_true,
        config.d_steps,
        traj_seed,
    )
    init_rng = np.random.default_rng(init_seed)
    x0_est = x0_true + init_rng.normal(0.0, np.sqrt(config.init_var), config.n)
    p0 = config.init_var * np.eye(config.n)
    ut = config.ut_params()
    estimates: Dict[str, Optional[np.ndarray]] = {}
    for name in config.filters:
        cfg = preset_config(
            name,
            gr_beta=config.gr_beta,
            gr_gamma=config.gr_gamma,
            huber_sigma=config.huber_sigma,
            cauchy_sigma=config.cauchy_sigma,
            ut=ut,
        )
        try:
            est = run_filter(cfg, model, basis, traj.measurements, x0_est, p0)
            if not np.all(np.isfinite(est)):
                raise GsKalmanError("non-finite estimate")
            estimates[name] = est
        except (GsKalmanError, np.linalg.LinAlgError, FloatingPointError):
            estimates[name] = None
    return k, traj.states, estimates


def _run_trial_payload(payload):
    config, k = payload
    return run_trial(config, k)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> RunResult:
    """Execute the Monte Carlo sweep and aggregate RMSE/ARMSE per filter."""
    t0 = time.perf_counter()
    results = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for k, truth, est in pool.map(
                _run_trial_payload,
                [(config, k) for k in range(config.m_trials)],
                chunksize=max(1, config.m_trials // (4 * workers)),
            ):
                results[k] = (truth, est)
    else:
        for k in range(config.m_trials):
            results[k] = run_trial(config, k)[1:]

    rmse: Dict[str, np.ndarray] = {}
    armse_out: Dict[str, float] = {}
    failures: Dict[str, int] = {}
    for name in config.filters:
        truths, ests = [], []
        failed = 0
        for k in range(config.m_trials):
            truth, est = results[k]
            if est[name] is None:
                failed += 1
                continue
            truths.append(truth)
            ests.append(est[name])
        failures[name] = failed
        if not truths:
            rmse[name] = np.full(config.d_steps, np.nan)
            armse_out[name] = float("nan")
            continue
        series = rmse_series(np.stack(truths), np.stack(ests))
        rmse[name] = series
        armse_out[name] = armse(series)

    trial_seeds = [int(_trial_seed(config.seed, k).generate_state(1)[0]) for k in range(config.m_trials)]
    return RunResult(
        rmse=rmse,
        armse=armse_out,
        failures=failures,
        trial_seeds=trial_seeds,
        wall_time=time.perf_counter() - t0,
        filters=config.filters,
    )


def emit_csv(result: RunResult, config: ExperimentConfig, out_dir=None) -> Path:
    """Write rmse.csv, armse.csv, the resolved config, and the graph edge list."""
    import yaml

    out = Path(out_dir if out_dir is not None else config.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        names = list(result.filters)
        lines = ["step," + ",".join(names)]
        d = len(next(iter(result.rmse.values())))
        for i in range(d):
            row = [str(i + 1)] + [f"{result.rmse[n][i]:.9g}" for n in names]
            lines.append(",".join(row))
        (out / "rmse.csv").write_text("\n".join(lines) + "\n")

        lines = ["filter,armse,failures"]
        for n in names:
            lines.append(f"{n},{result.armse[n]:.9g},{result.failures[n]}")
        (out / "armse.csv").write_text("\n".join(lines) + "\n")

        resolved = asdict(config)
        resolved["nominal_r"] = config.resolved_nominal_r()
        resolved["filters"] = list(config.filters)
        (out / "config.resolved").write_text(yaml.safe_dump(resolved, sort_keys=True))
        save_topology(build_topology(config), out / "graph.edges")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return out
