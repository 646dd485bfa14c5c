import numpy as np
import pytest
from pydantic import TypeAdapter, ValidationError

from backend.core.panel import encode_fixed_effects
from backend.core.estimators.deep_wide import DeepWideSpec, TrainConfig
from backend.core.estimators.linear import ols_fit
from backend.core.estimators.dml import (
    DeepWideNuisance,
    LassoNuisance,
    OlsNuisance,
    OracleNuisance,
    NuisanceKind,
    NuisanceSample,
    fit_nuisances,
    predict_nuisances,
)


@pytest.fixture
def sample(small_panel):
    return NuisanceSample.from_panel(small_panel, encode_fixed_effects(small_panel))


class TestNuisanceSample:

    def test_shapes(self, small_panel, sample):
        assert sample.n_rows == small_panel.n_obs
        assert sample.fe_dummies.shape == (200, 39 + 4)
        assert sample.linear_design().shape == (200, 4 + 43)

    def test_take_keeps_panel_rows(self, sample):
        subset = sample.take([5, 2])
        np.testing.assert_array_equal(subset.rows, [5, 2])
        np.testing.assert_array_equal(subset.outcome, sample.outcome[[5, 2]])


class TestNuisanceKinds:

    def test_discriminated_by_kind(self):
        adapter = TypeAdapter(NuisanceKind)

        assert isinstance(adapter.validate_python({"kind": "ols"}), OlsNuisance)
        assert isinstance(adapter.validate_python({"kind": "lasso", "rule": "fixed", "penalty": 0.1}), LassoNuisance)
        with pytest.raises(ValidationError):
            adapter.validate_python({"kind": "forest"})

    def test_fixed_rule_needs_penalty(self):
        with pytest.raises(ValidationError):
            LassoNuisance(rule="fixed")

    def test_oracle_lengths_must_match(self):
        with pytest.raises(ValidationError):
            OracleNuisance(g_values=np.zeros(3), m_values=np.zeros(4))

    def test_oracle_description_omits_values(self):
        assert OracleNuisance(g_values=[1.0], m_values=[2.0]).describe() == {"kind": "oracle"}


class TestFitNuisances:

    def test_ols_matches_direct_regression(self, sample):
        models = fit_nuisances(sample, OlsNuisance(), seed=0)
        estimates = predict_nuisances(models, sample)

        design = np.column_stack([np.ones(sample.n_rows), sample.linear_design()])
        np.testing.assert_allclose(estimates.g_hat, ols_fit(design, sample.outcome).fitted_values, atol=1e-9)
        np.testing.assert_allclose(estimates.v_hat, sample.treatment - estimates.m_hat)

    def test_ols_survives_missing_reference_entity(self, small_panel, sample):
        rows = np.flatnonzero(small_panel.entity_ids != "m000")
        models = fit_nuisances(sample.take(rows), OlsNuisance(), seed=0)

        estimates = predict_nuisances(models, sample)
        assert np.all(np.isfinite(estimates.g_hat))

    def test_unpenalized_lasso_matches_ols(self, panel_factory):
        dataset = panel_factory(n_entities=5, n_periods=4, k=3, seed=2)
        sample = NuisanceSample.from_panel(dataset, encode_fixed_effects(dataset))
        lasso = predict_nuisances(fit_nuisances(sample, LassoNuisance(rule="fixed", penalty=0.0), seed=0), sample)
        ols = predict_nuisances(fit_nuisances(sample, OlsNuisance(), seed=0), sample)

        np.testing.assert_allclose(lasso.g_hat, ols.g_hat, atol=1e-4)
        np.testing.assert_allclose(lasso.m_hat, ols.m_hat, atol=1e-4)

    def test_cross_validated_lasso_records_penalty(self, sample):
        models = fit_nuisances(sample, LassoNuisance(grid_size=10), seed=3)

        assert models.g.penalty > 0.0
        assert models.m.penalty > 0.0

    def test_oracle_returns_stored_values(self, sample):
        g = np.arange(sample.n_rows, dtype=float)
        m = -g
        models = fit_nuisances(sample.take([0, 1]), OracleNuisance(g_values=g, m_values=m), seed=0)

        estimates = predict_nuisances(models, sample.take([7, 3]))
        np.testing.assert_array_equal(estimates.g_hat, [7.0, 3.0])
        np.testing.assert_array_equal(estimates.m_hat, [-7.0, -3.0])

    def test_deep_wide_is_seeded(self, sample):
        kind = DeepWideNuisance(spec=DeepWideSpec(deep_layer_sizes=(4,)), train=TrainConfig(max_epochs=3))

        first = predict_nuisances(fit_nuisances(sample, kind, seed=5), sample)
        second = predict_nuisances(fit_nuisances(sample, kind, seed=5), sample)
        np.testing.assert_array_equal(first.g_hat, second.g_hat)
        np.testing.assert_array_equal(first.m_hat, second.m_hat)

    def test_deep_wide_without_controls(self, small_panel):
        bare = small_panel.with_roles("price", "tax", control_names=[])
        sample = NuisanceSample.from_panel(bare, encode_fixed_effects(bare))
        kind = DeepWideNuisance(train=TrainConfig(max_epochs=2))

        estimates = predict_nuisances(fit_nuisances(sample, kind, seed=1), sample)
        assert estimates.n_rows == bare.n_obs

    def test_empty_sample(self, sample):
        with pytest.raises(ValueError):
            fit_nuisances(sample.take([]), OlsNuisance(), seed=0)
