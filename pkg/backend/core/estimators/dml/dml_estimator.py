from __future__ import annotations
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy import stats

from backend.core.panel import PanelDataset, PanelDataError, encode_fixed_effects, standardize
from backend.core.estimators.deep_wide import DeepWideError
from backend.core.estimators.linear import LinearModelError
from .crossfit import CrossFitResult, ScoreForm, theta_crossfit
from .exceptions import DMLError, RepetitionFailureError, UnknownControlGroupError
from .nuisance import DeepWideNuisance, NuisanceKind

logger = logging.getLogger(__name__)

MAX_FAILED_SHARE = 0.2
RECOVERABLE_ERRORS = (DMLError, LinearModelError, DeepWideError, PanelDataError)


class DMLConfig(BaseModel):
    """Repeticiones (impar), aprendiz de las funciones nuisance y semilla maestra."""
    model_config = ConfigDict(frozen=True)

    repetitions: int = Field(default=51, ge=1)
    nuisance: NuisanceKind = Field(default_factory=DeepWideNuisance)
    seed: int = 0
    score: ScoreForm = "partialling_out"

    @field_validator("repetitions")
    @classmethod
    def _odd(cls, repetitions: int) -> int:
        if repetitions % 2 == 0:
            raise ValueError(f"repetitions must be odd, got {repetitions}")
        return repetitions

    def repetition_seeds(self) -> List[int]:
        return [self.seed + r for r in range(1, self.repetitions + 1)]

    def echo(self) -> Dict[str, Any]:
        return {
            "repetitions": self.repetitions,
            "seed": self.seed,
            "score": self.score,
            "nuisance": self.nuisance.describe(),
        }


@dataclass(frozen=True)
class DMLResult:
    """
    Resultado agregado: mediana de theta entre repeticiones y SE ajustado por la mediana.
    """
    theta_median: float
    standard_error: float
    per_repetition_thetas: np.ndarray
    per_repetition_ses: np.ndarray
    repetition_seeds: Tuple[int, ...]
    n_obs: int
    config: Dict[str, Any] = field(default_factory=dict)
    failures: Tuple[Tuple[int, str], ...] = ()

    @property
    def n_repetitions(self) -> int:
        return len(self.per_repetition_thetas)

    @property
    def t_stat(self) -> float:
        return self.theta_median / self.standard_error

    @property
    def p_value(self) -> float:
        return float(2.0 * stats.norm.sf(abs(self.t_stat)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta_median": self.theta_median,
            "se": self.standard_error,
            "n": self.n_obs,
            "repetitions": [
                {"seed": seed, "theta": float(theta), "se": float(se)}
                for seed, theta, se in zip(self.repetition_seeds, self.per_repetition_thetas,
                                           self.per_repetition_ses)
            ],
            "failed_repetitions": [{"seed": seed, "error": error} for seed, error in self.failures],
            "config": self.config,
        }


def order_median(values: Iterable[float]) -> float:
    """Mediana como estadístico de orden: con tamaño par se toma el central inferior."""
    ordered = np.sort(np.asarray(list(values), dtype=float))
    if ordered.size == 0:
        raise ValueError("median of an empty sequence")
    return float(ordered[(ordered.size - 1) // 2])


def median_adjusted_se(thetas: np.ndarray, ses: np.ndarray, theta_median: float) -> float:
    """Mediana de sqrt(se_r^2 + (theta_r - theta_mediana)^2)."""
    return order_median(np.sqrt(ses ** 2 + (thetas - theta_median) ** 2))


def _run_repetition(dataset: PanelDataset,
                    cfg: DMLConfig,
                    fixed_effects,
                    seed: int) -> Union[CrossFitResult, str]:
    try:
        return theta_crossfit(dataset, cfg.nuisance, seed, fixed_effects, score=cfg.score)
    except RECOVERABLE_ERRORS as e:
        logger.warning(f"DML repetition with seed {seed} failed: {str(e)}")
        return f"{type(e).__name__}: {str(e)}"


def dml_estimate(dataset: PanelDataset,
                 cfg: DMLConfig,
                 n_jobs: Optional[int] = None) -> DMLResult:
    """
    Ejecuta theta_crossfit con semillas seed+1..seed+R y agrega por la mediana.

    Las repeticiones son independientes; el resultado no depende del orden de ejecución.
    """
    fixed_effects = encode_fixed_effects(dataset)
    seeds = cfg.repetition_seeds()
    logger.info(f"DML ({cfg.nuisance.kind}): {cfg.repetitions} repetitions on N={dataset.n_obs}")

    if n_jobs == 1 or len(seeds) == 1:
        outcomes = [_run_repetition(dataset, cfg, fixed_effects, seed) for seed in seeds]
    else:
        outcomes = Parallel(n_jobs=n_jobs or -1, backend="threading")(
            delayed(_run_repetition)(dataset, cfg, fixed_effects, seed) for seed in seeds
        )

    successes = [(seed, out) for seed, out in zip(seeds, outcomes) if isinstance(out, CrossFitResult)]
    failures = tuple((seed, out) for seed, out in zip(seeds, outcomes) if isinstance(out, str))

    if not successes or len(failures) > MAX_FAILED_SHARE * len(seeds):
        raise RepetitionFailureError(
            len(failures), len(seeds), [f"seed {seed}: {error}" for seed, error in failures]
        )

    thetas = np.array([result.theta for _, result in successes])
    ses = np.array([result.standard_error for _, result in successes])
    theta_median = order_median(thetas)
    standard_error = median_adjusted_se(thetas, ses, theta_median)

    logger.info(f"DML ({cfg.nuisance.kind}) theta={theta_median:.6f}, se={standard_error:.6f}"
                f"{f', {len(failures)} failed repetitions' if failures else ''}")

    return DMLResult(
        theta_median=theta_median,
        standard_error=standard_error,
        per_repetition_thetas=thetas,
        per_repetition_ses=ses,
        repetition_seeds=tuple(seed for seed, _ in successes),
        n_obs=dataset.n_obs,
        config=cfg.echo(),
        failures=failures,
    )


def select_controls(dataset: PanelDataset,
                    outcome_col: str,
                    treatment_col: str,
                    include_groups: Iterable[str]) -> PanelDataset:
    """Reasigna roles y conserva solo los controles de los grupos incluidos."""
    include_groups = set(include_groups)
    unknown = include_groups - set(dataset.groups)
    if unknown:
        raise UnknownControlGroupError(unknown, dataset.groups)

    controls = [
        name for name in dataset.columns_in_groups(include_groups)
        if name not in (outcome_col, treatment_col)
    ]
    return dataset.with_roles(outcome_col, treatment_col, controls)


def estimate_effect(dataset: PanelDataset,
                    outcome_col: str,
                    treatment_col: str,
                    include_groups: Iterable[str],
                    cfg: DMLConfig,
                    n_jobs: Optional[int] = None) -> DMLResult:
    """
    Punto de entrada genérico: cualquier columna numérica como resultado o tratamiento, controles
    limitados a los grupos incluidos (vacío permitido: solo efectos fijos).
    """
    include_groups = sorted(set(include_groups))
    selected = select_controls(dataset, outcome_col, treatment_col, include_groups)
    standardized, _ = standardize(selected)
    logger.info(f"Estimating effect of {treatment_col} on {outcome_col} with groups {include_groups} "
                f"({standardized.n_controls} controls)")

    result = dml_estimate(standardized, cfg, n_jobs)
    config = {
        **result.config,
        "outcome": outcome_col,
        "treatment": treatment_col,
        "groups": include_groups,
        "n_controls": standardized.n_controls,
    }
    return DMLResult(
        theta_median=result.theta_median,
        standard_error=result.standard_error,
        per_repetition_thetas=result.per_repetition_thetas,
        per_repetition_ses=result.per_repetition_ses,
        repetition_seeds=result.repetition_seeds,
        n_obs=result.n_obs,
        config=config,
        failures=result.failures,
    )
