import numpy as np
import pytest

from backend.core.panel import encode_fixed_effects, split_crossfit
from backend.core.estimators.dml import (
    OlsNuisance,
    OracleNuisance,
    DegenerateTreatmentResidualError,
    theta_crossfit,
)


def zero_oracle(n: int) -> OracleNuisance:
    return OracleNuisance(g_values=np.zeros(n), m_values=np.zeros(n))


class TestThetaCrossfit:

    def test_zero_nuisances_reduce_to_ratio_of_sums(self, small_panel):
        split = split_crossfit(small_panel.n_obs, seed=9)
        result = theta_crossfit(small_panel, zero_oracle(small_panel.n_obs), seed=1, split=split)

        p, tau = small_panel.outcome, small_panel.treatment
        expected = [np.sum(tau[rows] * p[rows]) / np.sum(tau[rows] ** 2) for rows in (split.main, split.auxiliary)]
        assert result.theta == pytest.approx(np.mean(expected), rel=1e-12)
        assert result.folds[0].theta == pytest.approx(expected[0], rel=1e-12)

    def test_standard_error_formula(self, small_panel):
        result = theta_crossfit(small_panel, zero_oracle(small_panel.n_obs), seed=1)

        psi = np.concatenate([fold.score_terms(result.theta) for fold in result.folds])
        j0 = np.mean(np.concatenate([fold.treatment ** 2 for fold in result.folds]))
        expected = np.sqrt(np.mean(psi ** 2) / j0 ** 2 / len(psi))
        assert result.standard_error == pytest.approx(expected, rel=1e-12)
        assert result.n_obs == small_panel.n_obs

    def test_exact_treatment_model_is_degenerate(self, small_panel):
        oracle = OracleNuisance(g_values=np.zeros(small_panel.n_obs), m_values=small_panel.treatment)

        with pytest.raises(DegenerateTreatmentResidualError) as info:
            theta_crossfit(small_panel, oracle, seed=0)
        assert info.value.denominator == 0.0

    def test_swapping_the_split_gives_same_theta(self, small_panel):
        split = split_crossfit(small_panel.n_obs, seed=2)
        fixed_effects = encode_fixed_effects(small_panel)

        forward = theta_crossfit(small_panel, OlsNuisance(), seed=0, fixed_effects=fixed_effects, split=split)
        backward = theta_crossfit(small_panel, OlsNuisance(), seed=0, fixed_effects=fixed_effects,
                                  split=split.swapped())
        assert forward.theta == pytest.approx(backward.theta, rel=1e-12)

    @pytest.mark.parametrize("score", ["treatment", "partialling_out"])
    def test_score_sums_to_zero_in_each_fold(self, small_panel, score):
        result = theta_crossfit(small_panel, OlsNuisance(), seed=4, score=score)

        for fold in result.folds:
            assert abs(fold.score_sum) <= 1e-8 * fold.n_obs
            assert abs(np.sum(fold.score_terms(fold.theta, score))) <= 1e-8 * fold.n_obs

    @pytest.mark.parametrize("score", ["treatment", "partialling_out"])
    def test_linear_nuisances_recover_effect(self, panel_factory, score):
        dataset = panel_factory(n_entities=40, n_periods=40, noise_sd=0.3, seed=7)
        result = theta_crossfit(dataset, OlsNuisance(), seed=3, score=score)

        assert result.theta == pytest.approx(-0.5, abs=0.1)
        assert 0.0 < result.standard_error < 0.1

    def test_same_seed_same_estimate(self, small_panel):
        a = theta_crossfit(small_panel, OlsNuisance(), seed=12)
        b = theta_crossfit(small_panel, OlsNuisance(), seed=12)
        assert a.theta == b.theta
        assert a.to_dict()["fold_thetas"] == b.to_dict()["fold_thetas"]
