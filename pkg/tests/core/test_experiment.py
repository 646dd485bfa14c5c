import numpy as np
import pytest

from backend.core.estimators.dml import LassoNuisance
from backend.core.simulation import (
    DGPConfig,
    BiasReport,
    BiasSummary,
    SimulationError,
    draw_dgp,
    ols_subset_theta,
    run_experiment,
)

FAST_LASSO = LassoNuisance(rule="fixed", penalty=0.01)


@pytest.fixture
def tiny_config():
    return DGPConfig(k=5, entities=12, periods=4, replications=4, dml_repetitions=1, seed=11)


class TestBiasSummary:

    def test_statistics(self):
        summary = BiasSummary.from_biases(np.array([-1.0, 0.0, 1.0, 4.0]))

        assert summary.n == 4
        assert summary.mean_bias == pytest.approx(1.0)
        assert summary.median_bias == pytest.approx(0.5)
        assert summary.rmse == pytest.approx(np.sqrt(18.0 / 4))
        assert summary.mc_se == pytest.approx(np.std([-1.0, 0.0, 1.0, 4.0], ddof=1) / 2)

    def test_missing_density_is_tolerated(self):
        report = BiasReport.build(-0.5, ["a"], [0, 1], {"a": np.array([0.1, 0.1])})

        assert report.curves["a"] is None
        assert report.to_dict()["kde"]["a"] is None


class TestOlsSubset:

    def test_uses_fixed_effects_and_subset(self, tiny_config):
        draw = draw_dgp(tiny_config, 0)

        theta = ols_subset_theta(draw, subset_size=3, seed=1)
        assert theta == ols_subset_theta(draw, subset_size=3, seed=1)
        assert np.isfinite(theta)

    def test_empty_subset(self, tiny_config):
        assert np.isfinite(ols_subset_theta(draw_dgp(tiny_config, 0), subset_size=0, seed=0))

    def test_noiseless_panel_recovers_effect(self):
        cfg = DGPConfig(k=6, entities=15, periods=5, noise_sd_u=0.0, noise_sd_v=0.0, outer_slope_g=0.0, seed=3)

        theta = ols_subset_theta(draw_dgp(cfg, 0), subset_size=0, seed=0)
        assert theta == pytest.approx(-0.5, abs=1e-8)


class TestRunExperiment:

    def test_report_layout(self, tiny_config):
        report = run_experiment(tiny_config, ["ols_subset", "dml_oracle", "dml_lasso"], lasso=FAST_LASSO, n_jobs=1)

        assert report.estimators == ("ols_subset", "dml_oracle", "dml_lasso")
        assert report.replications == (0, 1, 2, 3)
        for name in report.estimators:
            assert report.biases[name].shape == (4,)
            assert report.summaries[name].n == 4
            assert report.curves[name].integral() == pytest.approx(1.0, abs=1e-2)
        payload = report.to_dict()
        assert payload["n_replications"] == 4
        assert payload["config"]["dgp"]["seed"] == 11

    def test_deterministic_regardless_of_threads(self, tiny_config):
        serial = run_experiment(tiny_config, ["ols_subset", "dml_lasso"], lasso=FAST_LASSO, n_jobs=1)
        threaded = run_experiment(tiny_config, ["ols_subset", "dml_lasso"], lasso=FAST_LASSO, n_jobs=2)

        for name in serial.estimators:
            np.testing.assert_array_equal(serial.biases[name], threaded.biases[name])

    def test_duplicate_estimators_collapse(self, tiny_config):
        report = run_experiment(tiny_config, ["ols_subset", "ols_subset"], n_jobs=1)
        assert report.estimators == ("ols_subset",)

    @pytest.mark.parametrize("estimators", [[], ["dml_forest"]])
    def test_invalid_estimators(self, tiny_config, estimators):
        with pytest.raises(SimulationError):
            run_experiment(tiny_config, estimators)

    @pytest.mark.slow
    def test_oracle_is_centered_and_subset_ols_is_biased(self):
        cfg = DGPConfig(k=20, entities=60, periods=7, replications=40, dml_repetitions=3, seed=20240101)
        report = run_experiment(cfg, ["ols_subset", "dml_oracle"])

        oracle = report.summaries["dml_oracle"]
        assert abs(oracle.mean_bias) < 3 * oracle.mc_se + 0.01
        assert abs(report.summaries["ols_subset"].mean_bias) > abs(oracle.mean_bias)

    @pytest.mark.slow
    def test_subset_ols_unbiased_without_confounding(self):
        cfg = DGPConfig(k=20, entities=60, periods=7, replications=200, coef_corr=0.0, fe_corr=0.0,
                        dml_repetitions=1, seed=20240101)
        report = run_experiment(cfg, ["ols_subset"])

        summary = report.summaries["ols_subset"]
        assert abs(summary.mean_bias) < 2 * summary.mc_se


class TestDeskProfile:

    @pytest.mark.slow
    def test_oracle_mean_bias_within_monte_carlo_error(self):
        cfg = DGPConfig(k=50, entities=100, periods=7, replications=500, dml_repetitions=1, seed=20240101)
        report = run_experiment(cfg, ["dml_oracle"])

        summary = report.summaries["dml_oracle"]
        assert summary.n == 500
        assert abs(summary.mean_bias) < 2 * summary.sd / np.sqrt(500)

    @pytest.mark.slow
    def test_deep_wide_has_smallest_bias(self):
        cfg = DGPConfig(k=50, entities=100, periods=7, replications=100, dml_repetitions=11, seed=20240101)
        report = run_experiment(cfg, ["ols_subset", "dml_lasso", "dml_dw"])

        bias = {name: abs(summary.mean_bias) for name, summary in report.summaries.items()}
        assert bias["dml_dw"] < 0.025
        assert bias["dml_dw"] < bias["ols_subset"]
        assert bias["dml_dw"] < bias["dml_lasso"]
