from __future__ import annotations
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from backend.core.seeding import derive_seed
from backend.core.panel import PanelDataError, encode_fixed_effects
from backend.core.estimators.deep_wide import DeepWideError
from backend.core.estimators.linear import LinearModelError, ols_fit
from backend.core.estimators.dml import (
    DMLConfig,
    DMLError,
    DeepWideNuisance,
    LassoNuisance,
    dml_estimate,
)
from .dgp import DGPConfig, DGPDraw, draw_dgp
from .exceptions import SimulationError, ReplicationFailureError, KDEError
from .kde import KDECurve, kde

logger = logging.getLogger(__name__)

ESTIMATORS = ("ols_subset", "dml_lasso", "dml_dw", "dml_oracle")
MAX_FAILED_SHARE = 0.1
RECOVERABLE_ERRORS = (DMLError, LinearModelError, DeepWideError, PanelDataError)


@dataclass(frozen=True)
class BiasSummary:
    n: int
    mean_bias: float
    median_bias: float
    sd: float
    rmse: float
    mc_se: float

    @classmethod
    def from_biases(cls, biases: np.ndarray) -> BiasSummary:
        n = len(biases)
        sd = float(np.std(biases, ddof=1)) if n > 1 else 0.0
        return cls(
            n=n,
            mean_bias=float(np.mean(biases)),
            median_bias=float(np.median(biases)),
            sd=sd,
            rmse=float(np.sqrt(np.mean(biases ** 2))),
            mc_se=sd / np.sqrt(n),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "mean_bias": self.mean_bias,
            "median_bias": self.median_bias,
            "sd": self.sd,
            "rmse": self.rmse,
            "mc_se": self.mc_se,
        }


@dataclass(frozen=True)
class ReplicationFailure:
    replication: int
    estimator: str
    error: str

    def to_dict(self) -> Dict[str, Any]:
        return {"replication": self.replication, "estimator": self.estimator, "error": self.error}


@dataclass(frozen=True)
class BiasReport:
    """
    Sesgos (theta_hat - theta0) por estimador y réplica, resúmenes y curvas KDE.
    """
    theta0: float
    estimators: Tuple[str, ...]
    replications: Tuple[int, ...]
    biases: Dict[str, np.ndarray]
    summaries: Dict[str, BiasSummary]
    curves: Dict[str, Optional[KDECurve]]
    failures: Tuple[ReplicationFailure, ...] = ()
    config: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(cls,
              theta0: float,
              estimators: Sequence[str],
              replications: Sequence[int],
              biases: Dict[str, np.ndarray],
              failures: Sequence[ReplicationFailure] = (),
              config: Optional[Dict[str, Any]] = None) -> BiasReport:
        curves: Dict[str, Optional[KDECurve]] = {}
        for name in estimators:
            try:
                curves[name] = kde(biases[name])
            except KDEError as e:
                logger.warning(f"No density for {name}: {str(e)}")
                curves[name] = None

        return cls(
            theta0=theta0,
            estimators=tuple(estimators),
            replications=tuple(replications),
            biases=biases,
            summaries={name: BiasSummary.from_biases(biases[name]) for name in estimators},
            curves=curves,
            failures=tuple(failures),
            config=config or {},
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta0": self.theta0,
            "estimators": list(self.estimators),
            "n_replications": len(self.replications),
            "replications": list(self.replications),
            "summary": {name: self.summaries[name].to_dict() for name in self.estimators},
            "biases": {name: self.biases[name].tolist() for name in self.estimators},
            "kde": {
                name: (self.curves[name].to_dict() if self.curves[name] is not None else None)
                for name in self.estimators
            },
            "failures": [f.to_dict() for f in self.failures],
            "config": self.config,
        }


@dataclass(frozen=True)
class ExperimentSetup:
    """Configuración de los estimadores dentro de cada réplica."""
    dgp: DGPConfig
    estimators: Tuple[str, ...]
    deep_wide: DeepWideNuisance
    lasso: LassoNuisance

    def echo(self) -> Dict[str, Any]:
        return {
            "dgp": self.dgp.model_dump(mode="json"),
            "estimators": list(self.estimators),
            "deep_wide": self.deep_wide.describe(),
            "lasso": self.lasso.describe(),
        }


def ols_subset_theta(draw: DGPDraw, subset_size: int, seed: int) -> float:
    """
    OLS del resultado sobre tratamiento + subconjunto aleatorio de controles + efectos fijos.
    """
    dataset = draw.dataset
    size = min(subset_size, dataset.n_controls)
    rng = np.random.default_rng(seed)
    subset = np.sort(rng.choice(dataset.n_controls, size=size, replace=False)) if size else np.array([], dtype=int)

    fixed_effects = encode_fixed_effects(dataset)
    design = np.hstack([dataset.treatment[:, None], dataset.controls[:, subset], fixed_effects.matrix])
    names = [dataset.treatment_name, *[dataset.control_names[i] for i in subset], *fixed_effects.column_names]
    fit = ols_fit(design, dataset.outcome, names)
    return fit.coefficient(dataset.treatment_name)


def _estimate(setup: ExperimentSetup, draw: DGPDraw, estimator: str) -> float:
    cfg = setup.dgp
    replication = draw.replication

    if estimator == "ols_subset":
        return ols_subset_theta(draw, cfg.ols_subset_size, derive_seed(cfg.seed, replication, 1))

    if estimator == "dml_lasso":
        nuisance = setup.lasso
    elif estimator == "dml_dw":
        nuisance = setup.deep_wide
    else:
        nuisance = draw.oracle_nuisance()

    dml_cfg = DMLConfig(
        repetitions=cfg.dml_repetitions,
        nuisance=nuisance,
        seed=derive_seed(cfg.seed, replication, 2 + ESTIMATORS.index(estimator)),
    )
    return dml_estimate(draw.dataset, dml_cfg, n_jobs=1).theta_median


def run_replication(setup: ExperimentSetup, replication: int) -> Union[Dict[str, float], ReplicationFailure]:
    """Una réplica: todos los estimadores consumen el mismo panel."""
    draw = draw_dgp(setup.dgp, replication)
    thetas: Dict[str, float] = {}
    for estimator in setup.estimators:
        try:
            thetas[estimator] = _estimate(setup, draw, estimator)
        except RECOVERABLE_ERRORS as e:
            logger.warning(f"Replication {replication}, {estimator} failed: {str(e)}")
            return ReplicationFailure(replication, estimator, f"{type(e).__name__}: {str(e)}")
    logger.debug(f"Replication {replication}: " + ", ".join(f"{k}={v:.5f}" for k, v in thetas.items()))
    return thetas


def run_experiment(cfg: DGPConfig,
                   estimators: Sequence[str],
                   deep_wide: Optional[DeepWideNuisance] = None,
                   lasso: Optional[LassoNuisance] = None,
                   n_jobs: Optional[int] = None) -> BiasReport:
    """
    Ejecuta cfg.replications réplicas independientes y devuelve el informe de sesgos.

    Una réplica en la que falla algún estimador se excluye para todos; se aborta si fallan más del 10%.
    """
    estimators = tuple(dict.fromkeys(estimators))
    if not estimators:
        raise SimulationError("at least one estimator is required")
    unknown = [e for e in estimators if e not in ESTIMATORS]
    if unknown:
        raise SimulationError(f"unknown estimators {unknown}; expected a subset of {list(ESTIMATORS)}")

    setup = ExperimentSetup(
        dgp=cfg,
        estimators=estimators,
        deep_wide=deep_wide or DeepWideNuisance(),
        lasso=lasso or LassoNuisance(),
    )
    logger.info(f"Monte Carlo: {cfg.replications} replications of J={cfg.entities}, T={cfg.periods}, "
                f"k={cfg.k} with {list(estimators)}")

    indices = list(range(cfg.replications))
    if n_jobs == 1:
        outcomes = [run_replication(setup, r) for r in indices]
    else:
        outcomes = Parallel(n_jobs=n_jobs or -1, backend="threading")(
            delayed(run_replication)(setup, r) for r in indices
        )

    failures = [out for out in outcomes if isinstance(out, ReplicationFailure)]
    if len(failures) > MAX_FAILED_SHARE * cfg.replications:
        raise ReplicationFailureError(
            len(failures), cfg.replications,
            [f"replication {f.replication} ({f.estimator}): {f.error}" for f in failures],
        )

    kept = [(r, out) for r, out in zip(indices, outcomes) if not isinstance(out, ReplicationFailure)]
    if not kept:
        raise ReplicationFailureError(len(failures), cfg.replications, ["no successful replications"])

    biases = {
        name: np.array([thetas[name] - cfg.theta0 for _, thetas in kept])
        for name in estimators
    }
    report = BiasReport.build(
        theta0=cfg.theta0,
        estimators=estimators,
        replications=[r for r, _ in kept],
        biases=biases,
        failures=failures,
        config=setup.echo(),
    )
    for name in estimators:
        summary = report.summaries[name]
        logger.info(f"{name}: mean bias {summary.mean_bias:+.5f} (MC se {summary.mc_se:.5f}), "
                    f"sd {summary.sd:.5f}, rmse {summary.rmse:.5f}")
    return report
