import dataclasses

import numpy as np
import pytest
from pydantic import ValidationError

from backend.core.panel import PanelDataset
from backend.core.estimators.dml import (
    DMLConfig,
    OlsNuisance,
    OracleNuisance,
    DeepWideNuisance,
    RepetitionFailureError,
    UnknownControlGroupError,
    dml_estimate,
    estimate_effect,
    median_adjusted_se,
    order_median,
    theta_crossfit,
)


def ols_config(repetitions: int = 3, seed: int = 0, score: str = "partialling_out") -> DMLConfig:
    return DMLConfig(repetitions=repetitions, nuisance=OlsNuisance(), seed=seed, score=score)


def with_values(dataset: PanelDataset, **values) -> PanelDataset:
    return dataclasses.replace(dataset, **values)


class TestMedianAggregation:

    def test_order_median(self):
        assert order_median([3.0, 1.0, 2.0]) == 2.0
        assert order_median([4.0, 1.0, 3.0, 2.0]) == 2.0
        with pytest.raises(ValueError):
            order_median([])

    def test_median_ignores_corrupted_upper_half(self):
        values = np.random.default_rng(4).normal(-0.5, 0.1, 51)
        corrupted = values.copy()
        corrupted[np.argsort(values)[-25:]] += 1e6

        assert order_median(corrupted) == order_median(values)

    def test_median_bounded_under_any_corruption(self):
        rng = np.random.default_rng(8)
        values = rng.normal(-0.5, 0.1, 51)
        for _ in range(20):
            corrupted = values.copy()
            corrupted[rng.choice(51, size=25, replace=False)] += 1e6
            assert values.min() <= order_median(corrupted) <= values.max()

    def test_median_adjusted_se(self):
        thetas = np.array([1.0, 2.0, 4.0])
        ses = np.array([0.5, 0.5, 0.5])

        expected = order_median(np.sqrt(0.25 + (thetas - 2.0) ** 2))
        assert median_adjusted_se(thetas, ses, 2.0) == pytest.approx(expected)
        assert median_adjusted_se(thetas, ses, 2.0) >= 0.5


class TestDMLConfig:

    def test_repetitions_must_be_odd(self):
        with pytest.raises(ValidationError):
            DMLConfig(repetitions=4)

    def test_default_learner_is_deep_wide(self):
        cfg = DMLConfig()
        assert cfg.repetitions == 51
        assert isinstance(cfg.nuisance, DeepWideNuisance)

    def test_repetition_seeds(self):
        assert ols_config(repetitions=3, seed=10).repetition_seeds() == [11, 12, 13]

    def test_nuisance_from_dict(self):
        assert isinstance(DMLConfig(repetitions=1, nuisance={"kind": "ols"}).nuisance, OlsNuisance)


class TestDmlEstimate:

    def test_single_repetition_equals_crossfit(self, small_panel):
        result = dml_estimate(small_panel, ols_config(repetitions=1, seed=5))
        single = theta_crossfit(small_panel, OlsNuisance(), seed=6)

        assert result.theta_median == single.theta
        assert result.standard_error == pytest.approx(single.standard_error)
        assert result.repetition_seeds == (6,)

    def test_median_of_repetitions(self, small_panel):
        result = dml_estimate(small_panel, ols_config(repetitions=5))

        assert result.n_repetitions == 5
        assert result.theta_median == order_median(result.per_repetition_thetas)
        assert result.standard_error > 0.0
        assert 0.0 <= result.p_value <= 1.0

    def test_thread_count_does_not_change_result(self, small_panel):
        serial = dml_estimate(small_panel, ols_config(repetitions=5), n_jobs=1)
        threaded = dml_estimate(small_panel, ols_config(repetitions=5), n_jobs=3)

        np.testing.assert_array_equal(serial.per_repetition_thetas, threaded.per_repetition_thetas)
        assert serial.theta_median == threaded.theta_median
        assert serial.standard_error == threaded.standard_error

    def test_outcome_scale_equivariance(self, small_panel):
        scaled = with_values(small_panel, outcome=4.0 * small_panel.outcome)

        base = dml_estimate(small_panel, ols_config())
        result = dml_estimate(scaled, ols_config())

        assert result.theta_median == pytest.approx(4.0 * base.theta_median, rel=1e-8)
        assert result.standard_error == pytest.approx(4.0 * base.standard_error, rel=1e-8)

    def test_treatment_shift_leaves_residuals_unchanged(self, small_panel):
        shifted = with_values(small_panel, treatment=small_panel.treatment + 2.0)

        base = theta_crossfit(small_panel, OlsNuisance(), seed=1)
        moved = theta_crossfit(shifted, OlsNuisance(), seed=1)

        for before, after in zip(base.folds, moved.folds):
            np.testing.assert_allclose(after.estimates.v_hat, before.estimates.v_hat, atol=1e-9)

    def test_treatment_shift_invariance(self, small_panel):
        shifted = with_values(small_panel, treatment=small_panel.treatment + 2.0)

        base = dml_estimate(small_panel, ols_config())
        moved = dml_estimate(shifted, ols_config())

        assert moved.theta_median == pytest.approx(base.theta_median, rel=1e-8)
        assert moved.standard_error == pytest.approx(base.standard_error, rel=1e-8)

    def test_all_repetitions_failing_aborts(self, small_panel):
        oracle = OracleNuisance(g_values=np.zeros(small_panel.n_obs), m_values=small_panel.treatment)
        cfg = DMLConfig(repetitions=3, nuisance=oracle)

        with pytest.raises(RepetitionFailureError) as info:
            dml_estimate(small_panel, cfg, n_jobs=1)
        assert info.value.n_failed == 3
        assert len(info.value.diagnostics) == 3

    def test_serialized_result(self, small_panel):
        payload = dml_estimate(small_panel, ols_config()).to_dict()

        assert set(payload) == {"theta_median", "se", "n", "repetitions", "failed_repetitions", "config"}
        assert payload["n"] == small_panel.n_obs
        assert [r["seed"] for r in payload["repetitions"]] == [1, 2, 3]
        assert payload["config"]["nuisance"] == {"kind": "ols"}


class TestEstimateEffect:

    def test_restricts_controls_to_groups(self, small_panel):
        result = estimate_effect(small_panel, "price", "tax", ["standard", "labor"], ols_config())

        assert result.config["groups"] == ["labor", "standard"]
        assert result.config["n_controls"] == 2
        assert result.config["outcome"] == "price"

    def test_fixed_effects_only(self, small_panel):
        result = estimate_effect(small_panel, "price", "tax", [], ols_config())
        assert result.config["n_controls"] == 0
        assert np.isfinite(result.theta_median)

    def test_any_column_can_be_the_outcome(self, small_panel):
        result = estimate_effect(small_panel, "c0", "tax", ["economic"], ols_config(repetitions=1))
        assert result.config["outcome"] == "c0"

    def test_unknown_group(self, small_panel):
        with pytest.raises(UnknownControlGroupError) as info:
            estimate_effect(small_panel, "price", "tax", ["schooling"], ols_config())
        assert info.value.groups == ["schooling"]


class TestCoverage:

    @pytest.mark.slow
    def test_interval_covers_true_effect(self, panel_factory):
        covered = 0
        for replication in range(200):
            dataset = panel_factory(n_entities=200, n_periods=10, seed=1000 + replication)
            result = dml_estimate(dataset, ols_config(repetitions=1, seed=replication), n_jobs=1)
            covered += abs(result.theta_median + 0.5) <= 1.96 * result.standard_error

        assert covered >= 180
