"""Benchmark harness: metrics, determinism, trial seeding, and CSV output."""
import csv
from pathlib import Path

import numpy as np
import pytest

from gskalman.bench import (
    ExperimentConfig,
    armse,
    build_topology,
    emit_csv,
    rmse_series,
    run_experiment,
    run_trial,
)
from gskalman.errors import ConfigError, InputError, ShapeError


class TestRmse:
    def test_perfect_estimates(self):
        x = np.random.default_rng(0).normal(size=(3, 5, 4))
        assert np.allclose(rmse_series(x, x), 0.0)

    def test_single_trial_unit_errors(self):
        n = 6
        truth = np.zeros((1, 1, n))
        est = np.ones((1, 1, n))
        assert np.isclose(rmse_series(truth, est)[0], 1.0)

    def test_two_trials_mixed(self):
        # Squared norms 0 and 2n across two trials: sqrt((1/n)(1/2)(2n)) = 1.
        n = 4
        truth = np.zeros((2, 1, n))
        est = np.zeros((2, 1, n))
        est[1] = np.sqrt(2.0)
        assert np.isclose(rmse_series(truth, est)[0], 1.0)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            rmse_series(np.zeros((2, 3, 4)), np.zeros((2, 3, 5)))


class TestArmse:
    def test_constant_series(self):
        assert armse(np.full(10, 2.5)) == 2.5

    def test_two_point_series(self):
        assert armse(np.array([0.0, 2.0])) == 1.0

    def test_random_series_vs_mean(self):
        x = np.random.default_rng(1).random(50)
        assert np.isclose(armse(x), x.mean(), atol=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            armse(np.array([]))


class TestConfig:
    def test_defaults(self):
        cfg = ExperimentConfig()
        assert cfg.n == 10 and cfg.d_steps == 100 and cfg.m_trials == 100
        assert cfg.q_var == 0.01 and cfg.init_var == 4.0

    def test_nominal_r_falls_back_to_scenario(self):
        assert ExperimentConfig(noise_scenario="caseA100").resolved_nominal_r() == 100.0
        assert ExperimentConfig(nominal_r=3.5).resolved_nominal_r() == 3.5

    def test_unknown_filter_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(filters=("ukf", "midas"))

    def test_unknown_scenario_rejected(self):
        with pytest.raises(InputError):
            ExperimentConfig(noise_scenario="caseZ")

    def test_unknown_graph_model_rejected(self):
        with pytest.raises(ConfigError):
            build_topology(ExperimentConfig(graph_model="torus"))


SMALL = dict(n=6, d_steps=15, m_trials=4, filters=("ukf", "gsp-gr-srukf"))


class TestDeterminism:
    def test_same_seed_same_results(self):
        cfg = ExperimentConfig(seed=3, **SMALL)
        a = run_experiment(cfg)
        b = run_experiment(cfg)
        for name in cfg.filters:
            assert np.array_equal(a.rmse[name], b.rmse[name])

    def test_trial_results_independent_of_order(self):
        # Trial k depends only on (master seed, k), not on which trials ran
        # before it.
        cfg = ExperimentConfig(seed=9, **SMALL)
        _, truth2, est2 = run_trial(cfg, 2)
        run_trial(cfg, 0)
        _, truth2_again, est2_again = run_trial(cfg, 2)
        assert np.array_equal(truth2, truth2_again)
        for name in cfg.filters:
            assert np.array_equal(est2[name], est2_again[name])

    def test_different_seeds_differ(self):
        a = run_experiment(ExperimentConfig(seed=1, **SMALL))
        b = run_experiment(ExperimentConfig(seed=2, **SMALL))
        assert not np.array_equal(a.rmse["ukf"], b.rmse["ukf"])

    def test_paired_trials_share_truth(self):
        cfg = ExperimentConfig(seed=5, **SMALL)
        _, truth, est = run_trial(cfg, 0)
        assert truth.shape == (15, 6)
        for name in cfg.filters:
            assert est[name] is None or est[name].shape == (15, 6)


class TestCsvOutput:
    def _run(self, tmp_path, seed=7):
        cfg = ExperimentConfig(seed=seed, out_dir=str(tmp_path / "res"), **SMALL)
        result = run_experiment(cfg)
        out = emit_csv(result, cfg)
        return cfg, result, out

    def test_files_written(self, tmp_path):
        _, _, out = self._run(tmp_path)
        for name in ("rmse.csv", "armse.csv", "config.resolved", "graph.edges"):
            assert (out / name).exists()

    def test_header_matches_filter_order(self, tmp_path):
        cfg, _, out = self._run(tmp_path)
        header = (out / "rmse.csv").read_text().splitlines()[0]
        assert header == "step," + ",".join(cfg.filters)

    def test_roundtrip_to_formatting_precision(self, tmp_path):
        cfg, result, out = self._run(tmp_path)
        with open(out / "rmse.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == cfg.d_steps
        for i, row in enumerate(rows):
            for name in cfg.filters:
                assert float(row[name]) == pytest.approx(
                    result.rmse[name][i], rel=1e-8
                )

    def test_armse_equals_column_means(self, tmp_path):
        cfg, _, out = self._run(tmp_path)
        with open(out / "rmse.csv") as fh:
            rows = list(csv.DictReader(fh))
        with open(out / "armse.csv") as fh:
            armse_rows = {r["filter"]: float(r["armse"]) for r in csv.DictReader(fh)}
        for name in cfg.filters:
            col = np.array([float(r[name]) for r in rows])
            assert np.isclose(armse_rows[name], col.mean(), atol=1e-8)

    def test_byte_identical_reruns(self, tmp_path):
        _, _, out_a = self._run(tmp_path / "a")
        _, _, out_b = self._run(tmp_path / "b")
        for name in ("rmse.csv", "armse.csv", "graph.edges"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_resolved_config_contains_effective_r(self, tmp_path):
        import yaml

        cfg, _, out = self._run(tmp_path)
        resolved = yaml.safe_load((out / "config.resolved").read_text())
        assert resolved["nominal_r"] == cfg.resolved_nominal_r()
        assert resolved["filters"] == list(cfg.filters)


class TestWorkerPool:
    def test_parallel_matches_serial(self):
        cfg = ExperimentConfig(seed=11, **SMALL)
        serial = run_experiment(cfg, workers=1)
        parallel = run_experiment(cfg, workers=2)
        for name in cfg.filters:
            assert np.array_equal(serial.rmse[name], parallel.rmse[name])
