from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.special import expit

from backend.core.seeding import derive_seed
from backend.core.panel import PanelDataset, CONTROL_GROUP_TAGS
from backend.core.estimators.dml import OracleNuisance

logger = logging.getLogger(__name__)

OUTCOME_NAME = "price"
TREATMENT_NAME = "tax"
STANDARD_GROUP = "standard"
SYNTHETIC_GROUPS = tuple(tag for tag in CONTROL_GROUP_TAGS if tag != STANDARD_GROUP)


class DGPConfig(BaseModel):
    """
    Proceso generador: índices sigmoides con coeficientes correlacionados y efectos fijos correlacionados.

    p = theta0 * tau + lin_g(sigmoid(s * g.x)) + gamma_j + eta_t + u
    tau = lin_m(sigmoid(s * m.x)) + delta_j + xi_t + v
    """
    model_config = ConfigDict(frozen=True)

    k: int = Field(default=50, ge=1)
    periods: int = Field(default=7, ge=2)
    entities: int = Field(default=100, ge=2)
    theta0: float = -0.5
    coef_corr: float = Field(default=0.25, gt=-1.0, lt=1.0)
    fe_corr: float = Field(default=0.25, gt=-1.0, lt=1.0)
    replications: int = Field(default=100, ge=1)
    noise_sd_u: float = Field(default=0.5, ge=0.0)
    noise_sd_v: float = Field(default=0.5, ge=0.0)
    coef_sd: float = Field(default=1.0, gt=0.0)
    fe_sd: float = Field(default=0.5, gt=0.0)
    index_scale: float = Field(default=1.0, gt=0.0)
    outer_slope_g: float = 2.0
    outer_intercept_g: float = -1.0
    outer_slope_m: float = 2.0
    outer_intercept_m: float = -1.0
    ols_subset_size: int = Field(default=3, ge=0)
    dml_repetitions: int = Field(default=11, ge=1)
    urban_share: float = Field(default=0.0, ge=0.0, le=1.0)
    seed: int = 0

    @field_validator("dml_repetitions")
    @classmethod
    def _odd(cls, repetitions: int) -> int:
        if repetitions % 2 == 0:
            raise ValueError(f"dml_repetitions must be odd, got {repetitions}")
        return repetitions

    @property
    def n_obs(self) -> int:
        return self.entities * self.periods

    @property
    def coordinate_sd(self) -> float:
        """Desviación estándar por coordenada de g y m: coef_sd / sqrt(k)."""
        return self.coef_sd / math.sqrt(self.k)

    def entity_ids(self) -> List[str]:
        width = len(str(self.entities))
        return [f"e{j + 1:0{width}d}" for j in range(self.entities)]

    def period_ids(self) -> List[str]:
        return [str(t + 1) for t in range(self.periods)]

    def control_names(self) -> List[str]:
        width = max(3, len(str(self.k)))
        return [f"x{i + 1:0{width}d}" for i in range(self.k)]

    def control_groups(self) -> Dict[str, str]:
        """Los primeros ols_subset_size controles son 'standard'; el resto rota sobre los diez grupos."""
        groups = {}
        for i, name in enumerate(self.control_names()):
            if i < self.ols_subset_size:
                groups[name] = STANDARD_GROUP
            else:
                groups[name] = SYNTHETIC_GROUPS[(i - self.ols_subset_size) % len(SYNTHETIC_GROUPS)]
        return groups


@dataclass(frozen=True)
class DGPDraw:
    """Panel sintético y todas sus piezas estructurales."""
    dataset: PanelDataset
    config: DGPConfig
    replication: int
    entity_index: np.ndarray
    period_index: np.ndarray
    g_coefficients: np.ndarray
    m_coefficients: np.ndarray
    entity_effects_outcome: np.ndarray
    period_effects_outcome: np.ndarray
    entity_effects_treatment: np.ndarray
    period_effects_treatment: np.ndarray
    u: np.ndarray
    v: np.ndarray

    @property
    def theta0(self) -> float:
        return self.config.theta0

    def sigmoid_g(self) -> np.ndarray:
        return expit(self.config.index_scale * (self.dataset.controls @ self.g_coefficients))

    def sigmoid_m(self) -> np.ndarray:
        return expit(self.config.index_scale * (self.dataset.controls @ self.m_coefficients))

    def g0_values(self) -> np.ndarray:
        """Función nuisance verdadera del resultado (sin el término theta0 * tau ni el ruido)."""
        cfg = self.config
        return (cfg.outer_slope_g * self.sigmoid_g() + cfg.outer_intercept_g
                + self.entity_effects_outcome[self.entity_index]
                + self.period_effects_outcome[self.period_index])

    def m0_values(self) -> np.ndarray:
        cfg = self.config
        return (cfg.outer_slope_m * self.sigmoid_m() + cfg.outer_intercept_m
                + self.entity_effects_treatment[self.entity_index]
                + self.period_effects_treatment[self.period_index])

    def reassemble_treatment(self) -> np.ndarray:
        return self.m0_values() + self.v

    def reassemble_outcome(self) -> np.ndarray:
        return self.theta0 * self.dataset.treatment + self.g0_values() + self.u

    def oracle_nuisance(self) -> OracleNuisance:
        return OracleNuisance(g_values=self.g0_values(), m_values=self.m0_values())

    def truth(self) -> Dict[str, Any]:
        """Piezas estructurales serializables (archivo de verdad)."""
        cfg = self.config
        entities = cfg.entity_ids()
        periods = cfg.period_ids()
        return {
            "theta0": cfg.theta0,
            "replication": self.replication,
            "config": cfg.model_dump(mode="json"),
            "outer_maps": {
                "g": {"slope": cfg.outer_slope_g, "intercept": cfg.outer_intercept_g},
                "m": {"slope": cfg.outer_slope_m, "intercept": cfg.outer_intercept_m},
            },
            "g_coefficients": self.g_coefficients.tolist(),
            "m_coefficients": self.m_coefficients.tolist(),
            "entity_effects_outcome": dict(zip(entities, self.entity_effects_outcome.tolist())),
            "period_effects_outcome": dict(zip(periods, self.period_effects_outcome.tolist())),
            "entity_effects_treatment": dict(zip(entities, self.entity_effects_treatment.tolist())),
            "period_effects_treatment": dict(zip(periods, self.period_effects_treatment.tolist())),
            "u": self.u.tolist(),
            "v": self.v.tolist(),
        }


def _correlated_pair(rng: np.random.Generator, size: int, sd: float, corr: float) -> Tuple[np.ndarray, np.ndarray]:
    first = rng.standard_normal(size)
    second = rng.standard_normal(size)
    return sd * first, sd * (corr * first + math.sqrt(1.0 - corr ** 2) * second)


def draw_dgp(cfg: DGPConfig, replication: int) -> DGPDraw:
    """
    Genera un panel determinista en (seed, replication). Filas ordenadas por entidad y luego periodo.
    """
    rng = np.random.default_rng(derive_seed(cfg.seed, replication))
    n = cfg.n_obs

    controls = rng.standard_normal((n, cfg.k))
    g_coef, m_coef = _correlated_pair(rng, cfg.k, cfg.coordinate_sd, cfg.coef_corr)
    gamma, delta = _correlated_pair(rng, cfg.entities, cfg.fe_sd, cfg.fe_corr)
    eta, xi = _correlated_pair(rng, cfg.periods, cfg.fe_sd, cfg.fe_corr)
    u = cfg.noise_sd_u * rng.standard_normal(n)
    v = cfg.noise_sd_v * rng.standard_normal(n)

    entity_index = np.repeat(np.arange(cfg.entities), cfg.periods)
    period_index = np.tile(np.arange(cfg.periods), cfg.entities)

    treatment = (cfg.outer_slope_m * expit(cfg.index_scale * (controls @ m_coef)) + cfg.outer_intercept_m
                 + delta[entity_index] + xi[period_index] + v)
    outcome = (cfg.theta0 * treatment
               + cfg.outer_slope_g * expit(cfg.index_scale * (controls @ g_coef)) + cfg.outer_intercept_g
               + gamma[entity_index] + eta[period_index] + u)

    entities = cfg.entity_ids()
    county_class: Optional[Dict[str, str]] = None
    if cfg.urban_share > 0:
        n_urban = int(math.ceil(cfg.urban_share * cfg.entities))
        county_class = {e: ("urban" if j < n_urban else "rural") for j, e in enumerate(entities)}

    dataset = PanelDataset(
        entity_ids=np.array(entities, dtype=object)[entity_index],
        period_ids=np.array(cfg.period_ids(), dtype=object)[period_index],
        outcome=outcome,
        treatment=treatment,
        controls=controls,
        control_names=tuple(cfg.control_names()),
        control_groups=cfg.control_groups(),
        outcome_name=OUTCOME_NAME,
        treatment_name=TREATMENT_NAME,
        county_class=county_class,
        source_name=f"dgp-seed{cfg.seed}-rep{replication}",
    )

    return DGPDraw(
        dataset=dataset,
        config=cfg,
        replication=replication,
        entity_index=entity_index,
        period_index=period_index,
        g_coefficients=g_coef,
        m_coefficients=m_coef,
        entity_effects_outcome=gamma,
        period_effects_outcome=eta,
        entity_effects_treatment=delta,
        period_effects_treatment=xi,
        u=u,
        v=v,
    )
