from __future__ import annotations
import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, Literal, Optional, Tuple

import numpy as np

from backend.core.seeding import derive_seed
from backend.core.panel import PanelDataset, FixedEffectDesign, CrossFitSplit, encode_fixed_effects, split_crossfit
from .exceptions import DegenerateTreatmentResidualError, ScoreOrthogonalityError
from .nuisance import (
    NuisanceKind,
    NuisanceModels,
    NuisanceSample,
    NuisanceEstimates,
    fit_nuisances,
    predict_nuisances,
)

logger = logging.getLogger(__name__)

DEGENERATE_THRESHOLD = 1e-10
SCORE_TOLERANCE = 1e-8

ScoreForm = Literal["treatment", "partialling_out"]


@dataclass(frozen=True)
class FoldEstimate:
    """
    Estimación en un pliegue: theta, denominador y términos del score sobre la muestra principal.
    """
    theta: float
    denominator: float
    score_sum: float
    estimates: NuisanceEstimates
    outcome: np.ndarray
    treatment: np.ndarray

    @property
    def n_obs(self) -> int:
        return len(self.outcome)

    def weights(self, score: ScoreForm) -> np.ndarray:
        return self.treatment if score == "treatment" else self.estimates.v_hat

    def score_terms(self, theta: float, score: ScoreForm = "partialling_out") -> np.ndarray:
        """psi = v_hat * (p - g_hat - w * theta), con w = tau o v_hat según la forma del score."""
        residual = self.outcome - self.estimates.g_hat - self.weights(score) * theta
        return self.estimates.v_hat * residual


@dataclass(frozen=True)
class CrossFitResult:
    theta: float
    standard_error: float
    folds: Tuple[FoldEstimate, FoldEstimate]
    seed: int

    @property
    def n_obs(self) -> int:
        return sum(fold.n_obs for fold in self.folds)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "theta": self.theta,
            "se": self.standard_error,
            "fold_thetas": [fold.theta for fold in self.folds],
        }


def theta_on_split(main: NuisanceSample,
                   models: NuisanceModels,
                   score: ScoreForm = "partialling_out") -> FoldEstimate:
    """
    theta(I^c, I) = (sum_I v_hat * w)^-1 * sum_I v_hat * (p - g_hat), con modelos entrenados en I^c.

    w = v_hat en la forma 'partialling_out' (por defecto) y w = tau en la forma 'treatment'.
    Con m_hat ruidoso la forma 'treatment' arrastra un sesgo de orden theta * var(m0 - m_hat) / var(v).
    """
    estimates = predict_nuisances(models, main)
    n = main.n_rows
    weights = main.treatment if score == "treatment" else estimates.v_hat

    denominator = float(np.sum(estimates.v_hat * weights))
    threshold = DEGENERATE_THRESHOLD * n
    if not abs(denominator) > threshold:
        raise DegenerateTreatmentResidualError(denominator, threshold, n)

    theta = float(np.sum(estimates.v_hat * (main.outcome - estimates.g_hat))) / denominator

    fold = FoldEstimate(
        theta=theta,
        denominator=denominator,
        score_sum=0.0,
        estimates=estimates,
        outcome=main.outcome,
        treatment=main.treatment,
    )
    score_sum = float(np.sum(fold.score_terms(theta, score)))
    if abs(score_sum) > SCORE_TOLERANCE * n:
        raise ScoreOrthogonalityError(score_sum, SCORE_TOLERANCE * n)

    return replace(fold, score_sum=score_sum)


def crossfit_standard_error(folds: Tuple[FoldEstimate, ...], theta: float, score: ScoreForm = "partialling_out") -> float:
    """
    SE por función de influencia agrupando ambos pliegues:
    sigma^2 = J0^-2 * mean(psi^2), J0 = mean(v_hat * w), SE = sigma / sqrt(N).
    """
    psi = np.concatenate([fold.score_terms(theta, score) for fold in folds])
    jacobian = np.concatenate([fold.estimates.v_hat * fold.weights(score) for fold in folds])
    n = len(psi)
    j0 = float(np.mean(jacobian))
    variance = float(np.mean(psi ** 2)) / (j0 ** 2)
    return float(np.sqrt(variance / n))


def theta_crossfit(dataset: PanelDataset,
                   kind: NuisanceKind,
                   seed: int,
                   fixed_effects: Optional[FixedEffectDesign] = None,
                   split: Optional[CrossFitSplit] = None,
                   score: ScoreForm = "partialling_out") -> CrossFitResult:
    """
    theta = (theta(I^c, I) + theta(I, I^c)) / 2 intercambiando muestra principal y auxiliar.
    """
    fixed_effects = fixed_effects if fixed_effects is not None else encode_fixed_effects(dataset)
    split = split if split is not None else split_crossfit(dataset.n_obs, derive_seed(seed, 0))

    folds = []
    for index, fold_split in enumerate((split, split.swapped())):
        auxiliary = NuisanceSample.from_panel(dataset, fixed_effects, fold_split.auxiliary)
        main = NuisanceSample.from_panel(dataset, fixed_effects, fold_split.main)
        models = fit_nuisances(auxiliary, kind, derive_seed(seed, 1, index))
        folds.append(theta_on_split(main, models, score))

    theta = 0.5 * (folds[0].theta + folds[1].theta)
    se = crossfit_standard_error(tuple(folds), theta, score)
    logger.debug(f"Cross-fit seed {seed}: theta={theta:.6f} (folds {folds[0].theta:.6f}, "
                 f"{folds[1].theta:.6f}), se={se:.6f}")
    return CrossFitResult(theta=theta, standard_error=se, folds=(folds[0], folds[1]), seed=seed)
