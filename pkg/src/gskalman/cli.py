"""Command-line entry point: run experiments, stability analysis, graph tools.

Subcommands:
    run      Monte Carlo benchmark; writes rmse.csv / armse.csv / config.resolved / graph.edges
    analyze  spectral radius and Lyapunov steady-state covariance of the
             converged error dynamics for a config snapshot
    graph    generate and save a random topology

Exit code 0 on success; on failure a single machine-readable
``error: <type>: <message>`` line goes to stderr and the exit code is 1.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np
import yaml

from . import bench, stability
from .errors import GsKalmanError
from .filters import FILTER_PRESETS, FilterState, preset_config, step
from .graph import build_laplacian, eigendecompose, save_topology
from .models import benchmark_f_jacobian, benchmark_initial_state, benchmark_model, simulate_trajectory
from .noise import SCENARIOS, Gaussian, get_scenario


def _config_from_args(args) -> bench.ExperimentConfig:
    values = {}
    if args.config:
        raw = yaml.safe_load(Path(args.config).read_text()) or {}
        flat = {}
        for key, val in raw.items():
            if isinstance(val, dict):
                for sub, subval in val.items():
                    flat[f"{key}_{sub}" if not hasattr(bench.ExperimentConfig, sub) else sub] = subval
            else:
                flat[key] = val
        known = {f.name for f in dataclasses.fields(bench.ExperimentConfig)}
        values.update({k: v for k, v in flat.items() if k in known})
    overrides = {
        "noise_scenario": args.scenario,
        "seed": args.seed,
        "m_trials": args.trials,
        "d_steps": args.steps,
        "out_dir": args.out,
    }
    if args.filters:
        overrides["filters"] = tuple(args.filters.split(","))
    values.update({k: v for k, v in overrides.items() if v is not None})
    if getattr(args, "paper_scale", False):
        values["m_trials"] = 1000
    return bench.ExperimentConfig(**values)


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    result = bench.run_experiment(config, workers=args.workers)
    out = bench.emit_csv(result, config)
    for name in result.filters:
        print(
            f"{name}: armse={result.armse[name]:.6f} failures={result.failures[name]}"
        )
    print(f"wrote {out}/rmse.csv, armse.csv, config.resolved, graph.edges")
    print(f"wall time {result.wall_time:.2f}s")
    return 0


def _cmd_analyze(args) -> int:
    config = _config_from_args(args)
    topology = bench.build_topology(config)
    basis = eigendecompose(build_laplacian(topology))
    model = benchmark_model(config.n, config.phi, config.q_var, config.resolved_nominal_r())
    scenario = get_scenario(config.noise_scenario)
    cfg = preset_config(args.filter, gr_beta=config.gr_beta, gr_gamma=config.gr_gamma)
    traj = simulate_trajectory(
        model,
        Gaussian(0.0, config.q_var),
        scenario.measurement,
        benchmark_initial_state(config.n),
        config.d_steps,
        config.seed,
    )
    state = FilterState.from_covariance(
        benchmark_initial_state(config.n),
        config.init_var * np.eye(config.n),
        cfg.use_sqrt,
    )
    # Converged-gain snapshot: average gain and measurement matrix over the
    # final quarter of the run.
    gains, h_mats = [], []
    from .filters import build_augmented_system, irls_update, measurement_stats, predict
    from .sqrt_kernels import psd_factor

    tail = max(1, config.d_steps // 4)
    for t, y in enumerate(traj.measurements):
        if cfg.use_sqrt:
            x_pred, sigma_pred = predict(state, model, cfg.ut)
        else:
            from .filters import predict_full

            x_pred, p_pred = predict_full(state, model, cfg.ut)
            sigma_pred = psd_factor(p_pred)
        y_pred_v, p_xy_v, omega_v = measurement_stats(x_pred, sigma_pred, model, cfg.ut, basis)
        aug = build_augmented_system(
            x_pred, sigma_pred, y, y_pred_v, p_xy_v, omega_v, basis, model.r_cov_nominal
        )
        res = irls_update(aug, cfg.loss, cfg)
        state = step(state, y, model, basis, cfg)
        if t >= config.d_steps - tail:
            gains.append(res.k_gain)
            h_mats.append(aug.h_v)
    k_bar = np.mean(gains, axis=0)
    h_bar = np.mean(h_mats, axis=0)
    f_jac_v = basis.v.T @ benchmark_f_jacobian(state.x_hat) @ basis.v
    q_v = basis.v.T @ model.q_cov @ basis.v
    r_v = basis.v.T @ model.r_cov_nominal @ basis.v
    dyn = stability.error_dynamics(f_jac_v, h_bar, k_bar, q_v, r_v)
    rho = stability.spectral_radius(dyn.a_mat)
    print(f"spectral_radius: {rho:.6f}")
    if rho < 1.0:
        delta = stability.solve_lyapunov(dyn)
        residual = np.abs(delta - dyn.a_mat @ delta @ dyn.a_mat.T - dyn.b_mat).max()
        print("lyapunov_diagonal: " + " ".join(f"{d:.6g}" for d in np.diag(delta)))
        print(f"residual: {residual:.3e}")
    else:
        print("lyapunov_diagonal: unstable (no fixed point)")
    return 0


def _cmd_graph(args) -> int:
    config = bench.ExperimentConfig(
        n=args.n, graph_model=args.model, graph_param=args.param, seed=args.seed
    )
    topology = bench.build_topology(config)
    save_topology(topology, args.out)
    edges = int(np.count_nonzero(topology.weights) // 2)
    print(f"wrote {args.out}: {topology.n} vertices, {edges} edges")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML config file")
    parser.add_argument("--scenario", choices=sorted(SCENARIOS), help="noise scenario")
    parser.add_argument("--filters", help="comma-separated filter names")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--trials", type=int, help="Monte Carlo trial count")
    parser.add_argument("--steps", type=int, help="time steps per trial")
    parser.add_argument("--out", help="output directory")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gskalman")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a Monte Carlo benchmark")
    _add_common(p_run)
    p_run.add_argument("--paper-scale", action="store_true", help="use M = 1000 trials")
    p_run.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    p_run.set_defaults(fn=_cmd_run)

    p_an = sub.add_parser("analyze", help="stability analysis of converged error dynamics")
    _add_common(p_an)
    p_an.add_argument(
        "--filter", default="gsp-gr-srukf", choices=sorted(FILTER_PRESETS)
    )
    p_an.set_defaults(fn=_cmd_analyze)

    p_g = sub.add_parser("graph", help="generate and save a topology")
    p_g.add_argument("--n", type=int, default=10)
    p_g.add_argument(
        "--model",
        default="erdos_renyi",
        choices=["erdos_renyi", "ring", "random_geometric"],
    )
    p_g.add_argument("--param", type=float, default=0.5)
    p_g.add_argument("--seed", type=int, default=0)
    p_g.add_argument("--out", default="graph.edges")
    p_g.set_defaults(fn=_cmd_graph)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (GsKalmanError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
