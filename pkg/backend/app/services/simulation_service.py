# backend/app/services/simulation_service.py
import logging
from dataclasses import replace
from pathlib import Path
from typing import Dict, Optional

from ...core.estimators.deep_wide import TrainConfig
from ...core.estimators.dml import DeepWideNuisance, LassoNuisance
from ...core.simulation import DGPConfig, run_experiment, generate_panel
from ...core.generators.bias_report import BiasReportWriter
from ..core.profiles import get_profile
from ..core.storage import StorageManager
from ..models.run_config import RunConfig

logger = logging.getLogger(__name__)

PANEL_FILENAME = "panel.csv"


class SimulationService:

    @staticmethod
    def dgp_config(cfg: RunConfig) -> DGPConfig:
        """Valores del perfil sobrescritos por los flags explícitos."""
        profile = get_profile(cfg.profile)
        overrides = {
            "k": cfg.k if cfg.k is not None else profile.k,
            "entities": cfg.entities if cfg.entities is not None else profile.entities,
            "periods": cfg.periods if cfg.periods is not None else profile.periods,
            "replications": cfg.reps if cfg.reps is not None else profile.replications,
            "dml_repetitions": cfg.dml_reps if cfg.dml_reps is not None else profile.dml_repetitions,
            "seed": cfg.seed,
        }
        if cfg.theta0 is not None:
            overrides["theta0"] = cfg.theta0
        if cfg.urban_share is not None:
            overrides["urban_share"] = cfg.urban_share
        return DGPConfig(**overrides)

    @staticmethod
    def run(cfg: RunConfig, n_jobs: Optional[int] = None) -> Dict[str, Path]:
        """
        Ejecuta el experimento Monte Carlo y escribe el informe JSON y las curvas KDE.
        """
        output_dir = StorageManager.prepare_output_dir(cfg.output)
        dgp = SimulationService.dgp_config(cfg)

        deep_wide = DeepWideNuisance()
        if cfg.max_epochs is not None:
            deep_wide = DeepWideNuisance(train=TrainConfig(max_epochs=cfg.max_epochs))
        lasso = LassoNuisance()
        if cfg.lasso_lambda is not None:
            lasso = LassoNuisance(rule="fixed", penalty=cfg.lasso_lambda)

        report = run_experiment(dgp, cfg.estimators, deep_wide=deep_wide, lasso=lasso, n_jobs=n_jobs)
        report = replace(report, config={**report.config, "run": cfg.echo()})
        return BiasReportWriter.write(report, output_dir)

    @staticmethod
    def generate(cfg: RunConfig) -> Dict[str, Path]:
        """Una extracción del DGP exportada como CSV + esquema + archivo de verdad."""
        output_dir = StorageManager.prepare_output_dir(cfg.output)
        dgp = SimulationService.dgp_config(cfg)
        paths = generate_panel(dgp, output_dir / PANEL_FILENAME, cfg.replication)
        return {"csv": paths.csv, "schema": paths.schema, "truth": paths.truth}
