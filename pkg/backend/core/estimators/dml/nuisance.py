from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Annotated, Any, Dict, Literal, Optional, Protocol, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from backend.core.seeding import derive_seed
from backend.core.panel import PanelDataset, FixedEffectDesign, split_train_val
from backend.core.estimators.deep_wide import (
    DeepWideSpec,
    DeepWideParams,
    NetInputs,
    TrainConfig,
    TrainTrace,
    DeepWideTrainer,
    predict as net_predict,
)
from backend.core.estimators.linear import RankDeficiencyError, ols_fit, lasso_fit, lasso_lambda_cv, lambda_grid

logger = logging.getLogger(__name__)

CONSTANT_COLUMN_TOLERANCE = 1e-12


class DeepWideNuisance(BaseModel):
    """Red deep-wide para g y m."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["deep_wide"] = "deep_wide"
    spec: DeepWideSpec = Field(default_factory=DeepWideSpec)
    train: TrainConfig = Field(default_factory=TrainConfig)

    def describe(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class LassoNuisance(BaseModel):
    """LASSO con lambda por validación cruzada ('cv') o fijo ('fixed')."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["lasso"] = "lasso"
    rule: Literal["cv", "fixed"] = "cv"
    penalty: Optional[float] = Field(default=None, ge=0.0)
    folds: int = Field(default=5, ge=2)
    grid_size: int = Field(default=50, ge=1)
    grid_ratio: float = Field(default=1e-4, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _penalty_for_fixed_rule(self) -> LassoNuisance:
        if self.rule == "fixed" and self.penalty is None:
            raise ValueError("rule 'fixed' requires a penalty")
        return self

    def describe(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class OlsNuisance(BaseModel):
    """Mínimos cuadrados sobre controles + dummies de efectos fijos."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["ols"] = "ols"

    def describe(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class OracleNuisance(BaseModel):
    """
    Valores verdaderos de g0 y m0 por fila del panel completo (para simulaciones).
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["oracle"] = "oracle"
    g_values: np.ndarray
    m_values: np.ndarray

    @field_validator("g_values", "m_values", mode="before")
    @classmethod
    def _as_vector(cls, values: Any) -> np.ndarray:
        vector = np.asarray(values, dtype=float).reshape(-1)
        vector.setflags(write=False)
        return vector

    @model_validator(mode="after")
    def _same_length(self) -> OracleNuisance:
        if self.g_values.shape != self.m_values.shape:
            raise ValueError(f"g_values and m_values differ in length: "
                             f"{self.g_values.shape[0]} vs {self.m_values.shape[0]}")
        return self

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind}


NuisanceKind = Annotated[
    Union[DeepWideNuisance, LassoNuisance, OlsNuisance, OracleNuisance],
    Field(discriminator="kind"),
]


@dataclass(frozen=True)
class NuisanceSample:
    """Filas de un panel listas para los aprendices: resultado, tratamiento, controles y dummies."""
    rows: np.ndarray
    outcome: np.ndarray
    treatment: np.ndarray
    controls: np.ndarray
    fe_dummies: np.ndarray

    @classmethod
    def from_panel(cls,
                   dataset: PanelDataset,
                   fixed_effects: FixedEffectDesign,
                   rows: Optional[Sequence[int]] = None) -> NuisanceSample:
        rows = np.arange(dataset.n_obs) if rows is None else np.asarray(rows, dtype=int)
        return cls(
            rows=rows,
            outcome=np.asarray(dataset.outcome)[rows],
            treatment=np.asarray(dataset.treatment)[rows],
            controls=np.asarray(dataset.controls)[rows, :],
            fe_dummies=fixed_effects.dummies[rows, :],
        )

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def take(self, positions: Sequence[int]) -> NuisanceSample:
        positions = np.asarray(positions, dtype=int)
        return NuisanceSample(
            rows=self.rows[positions],
            outcome=self.outcome[positions],
            treatment=self.treatment[positions],
            controls=self.controls[positions, :],
            fe_dummies=self.fe_dummies[positions, :],
        )

    def linear_design(self) -> np.ndarray:
        return np.hstack([self.controls, self.fe_dummies])


class NuisanceModel(Protocol):
    def predict(self, sample: NuisanceSample) -> np.ndarray:
        ...


@dataclass(frozen=True)
class LinearNuisanceModel:
    """Modelo lineal ajustado sobre las columnas no constantes de la muestra auxiliar."""
    columns: np.ndarray
    coefficients: np.ndarray
    intercept: float
    penalty: Optional[float] = None

    def predict(self, sample: NuisanceSample) -> np.ndarray:
        return sample.linear_design()[:, self.columns] @ self.coefficients + self.intercept


@dataclass(frozen=True)
class DeepWideNuisanceModel:
    params: DeepWideParams
    spec: DeepWideSpec
    trace: TrainTrace

    def predict(self, sample: NuisanceSample) -> np.ndarray:
        return net_predict(self.params, self.spec, _net_inputs(sample))


@dataclass(frozen=True)
class OracleNuisanceModel:
    values: np.ndarray

    def predict(self, sample: NuisanceSample) -> np.ndarray:
        return self.values[sample.rows]


@dataclass(frozen=True)
class NuisanceModels:
    g: NuisanceModel
    m: NuisanceModel


@dataclass(frozen=True)
class NuisanceEstimates:
    """g_hat, m_hat y el residuo del tratamiento v_hat = tau - m_hat sobre una muestra."""
    g_hat: np.ndarray
    m_hat: np.ndarray
    v_hat: np.ndarray

    @property
    def n_rows(self) -> int:
        return len(self.g_hat)


def _net_inputs(sample: NuisanceSample) -> NetInputs:
    controls = sample.controls
    if controls.shape[1] == 0:
        # Sin controles: el camino profundo recibe una columna cero
        controls = np.zeros((sample.n_rows, 1))
    return NetInputs(controls, sample.fe_dummies)


def _varying_columns(design: np.ndarray) -> np.ndarray:
    spread = design.max(axis=0) - design.min(axis=0) if design.shape[0] else np.zeros(design.shape[1])
    return np.flatnonzero(spread > CONSTANT_COLUMN_TOLERANCE)


def _fit_ols(sample: NuisanceSample, target: np.ndarray) -> LinearNuisanceModel:
    design = sample.linear_design()
    columns = _varying_columns(design)
    full = np.hstack([np.ones((sample.n_rows, 1)), design[:, columns]])
    names = ["intercept", *[str(j) for j in columns]]

    try:
        fit = ols_fit(full, target, names)
    except RankDeficiencyError as e:
        # La muestra auxiliar puede no contener el nivel de referencia de un factor
        logger.debug(f"Dropping {len(e.dependent_columns)} dependent columns from the OLS nuisance design")
        keep = [i for i, name in enumerate(names) if name not in set(e.dependent_columns)]
        fit = ols_fit(full[:, keep], target, [names[i] for i in keep])

    coefficients = dict(zip(fit.column_names, fit.coefficients))
    return LinearNuisanceModel(
        columns=columns,
        coefficients=np.array([coefficients.get(str(j), 0.0) for j in columns]),
        intercept=float(coefficients.get("intercept", 0.0)),
    )


def _fit_lasso(sample: NuisanceSample, target: np.ndarray, kind: LassoNuisance, seed: int) -> LinearNuisanceModel:
    design = sample.linear_design()
    columns = _varying_columns(design)
    selected = design[:, columns]
    means = selected.mean(axis=0)
    scales = selected.std(axis=0, ddof=1)
    standardized = (selected - means) / scales

    if kind.rule == "fixed":
        penalty = float(kind.penalty)
    else:
        grid = lambda_grid(standardized, target, kind.grid_size, kind.grid_ratio)
        penalty = lasso_lambda_cv(standardized, target, folds=kind.folds, grid=grid, seed=seed)

    fit = lasso_fit(standardized, target, penalty)
    coefficients = fit.coefficients / scales
    intercept = fit.intercept - float(means @ coefficients)
    return LinearNuisanceModel(columns=columns, coefficients=coefficients, intercept=intercept, penalty=penalty)


def _fit_deep_wide(sample: NuisanceSample,
                   target: np.ndarray,
                   kind: DeepWideNuisance,
                   split_seed: int,
                   train_seed: int) -> DeepWideNuisanceModel:
    split = split_train_val(np.arange(sample.n_rows), split_seed)
    inputs = _net_inputs(sample)
    cfg = kind.train.model_copy(update={"seed": train_seed})
    params, trace = DeepWideTrainer(kind.spec, cfg).fit(
        inputs.take(split.train),
        inputs.take(split.validation),
        target[split.train],
        target[split.validation],
    )
    return DeepWideNuisanceModel(params=params, spec=kind.spec, trace=trace)


def fit_nuisances(sample: NuisanceSample, kind: NuisanceKind, seed: int) -> NuisanceModels:
    """
    Ajusta g (controles + efectos fijos -> resultado) y m (-> tratamiento) solo con la muestra dada.
    """
    if sample.n_rows == 0:
        raise ValueError("nuisance sample must be non-empty")

    if isinstance(kind, OracleNuisance):
        return NuisanceModels(g=OracleNuisanceModel(kind.g_values), m=OracleNuisanceModel(kind.m_values))

    if isinstance(kind, OlsNuisance):
        return NuisanceModels(g=_fit_ols(sample, sample.outcome), m=_fit_ols(sample, sample.treatment))

    if isinstance(kind, LassoNuisance):
        return NuisanceModels(
            g=_fit_lasso(sample, sample.outcome, kind, derive_seed(seed, 1)),
            m=_fit_lasso(sample, sample.treatment, kind, derive_seed(seed, 2)),
        )

    if isinstance(kind, DeepWideNuisance):
        split_seed = derive_seed(seed, 0)
        return NuisanceModels(
            g=_fit_deep_wide(sample, sample.outcome, kind, split_seed, derive_seed(seed, 1)),
            m=_fit_deep_wide(sample, sample.treatment, kind, split_seed, derive_seed(seed, 2)),
        )

    raise TypeError(f"Unsupported nuisance kind: {type(kind).__name__}")


def predict_nuisances(models: NuisanceModels, sample: NuisanceSample) -> NuisanceEstimates:
    g_hat = np.asarray(models.g.predict(sample), dtype=float)
    m_hat = np.asarray(models.m.predict(sample), dtype=float)
    return NuisanceEstimates(g_hat=g_hat, m_hat=m_hat, v_hat=sample.treatment - m_hat)
