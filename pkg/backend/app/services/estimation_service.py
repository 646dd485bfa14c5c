# backend/app/services/estimation_service.py
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ...core.panel import PanelDataset, drop_constant_controls, load_csv, standardize, subset_by_class
from ...core.estimators.deep_wide import TrainConfig
from ...core.estimators.dml import DMLConfig, DeepWideNuisance, LassoNuisance, NuisanceKind, estimate_effect
from ...core.generators.regression_table import RegressionTableBuilder, RegressionTableWriter
from ..core.profiles import ESTIMATE_DML_REPETITIONS
from ..core.storage import StorageManager
from ..models.run_config import RunConfig

logger = logging.getLogger(__name__)

DML_LABELS = {"dml-dw": "DML-DW", "dml-lasso": "DML-LASSO"}
STANDARD_GROUP = "standard"


class EstimationService:

    @staticmethod
    def nuisance_for(estimator: str, cfg: RunConfig) -> NuisanceKind:
        if estimator == "dml-lasso":
            if cfg.lasso_lambda is not None:
                return LassoNuisance(rule="fixed", penalty=cfg.lasso_lambda)
            return LassoNuisance()
        if cfg.max_epochs is not None:
            return DeepWideNuisance(train=TrainConfig(max_epochs=cfg.max_epochs))
        return DeepWideNuisance()

    @staticmethod
    def prepare_panel(cfg: RunConfig) -> Tuple[PanelDataset, List[str]]:
        """
        Carga el panel, filtra por clase, reasigna roles y estandariza dentro de la muestra resultante.

        Los controles constantes en la muestra se descartan; se devuelven sus nombres.
        """
        dataset = load_csv(cfg.input, cfg.schema_path)

        if cfg.county_class != "all":
            dataset = subset_by_class(dataset, cfg.county_class)

        if cfg.outcome or cfg.treatment:
            dataset = dataset.with_roles(cfg.outcome or dataset.outcome_name, cfg.treatment or dataset.treatment_name)

        dataset, dropped = drop_constant_controls(dataset)
        if dropped:
            logger.warning(f"Dropping {len(dropped)} control(s) with no variation in the '{cfg.county_class}' "
                           f"sample: {dropped}")

        dataset, _ = standardize(dataset)
        return dataset, dropped

    @staticmethod
    def dml_specifications(cfg: RunConfig, dataset: PanelDataset) -> List[List[str]]:
        if cfg.group_sweep:
            return [[group] for group in dataset.groups if group != STANDARD_GROUP]
        if cfg.groups is not None:
            return [list(cfg.groups)]
        return [list(dataset.groups)]

    @staticmethod
    def run(cfg: RunConfig, n_jobs: Optional[int] = None) -> Dict[str, Path]:
        """
        Estima OLS-FE, OLS-FE + controles estándar y DML según la selección, y escribe la tabla.
        """
        output_dir = StorageManager.prepare_output_dir(cfg.output)
        dataset, dropped = EstimationService.prepare_panel(cfg)
        builder = RegressionTableBuilder(dataset)

        if "ols" in cfg.estimators:
            builder.add_ols("OLS-FE")
            builder.add_ols("OLS-FE+std", with_standard_controls=True)

        for estimator in cfg.estimators:
            if estimator == "ols":
                continue
            dml_cfg = DMLConfig(
                repetitions=cfg.reps or ESTIMATE_DML_REPETITIONS,
                nuisance=EstimationService.nuisance_for(estimator, cfg),
                seed=cfg.seed,
                score=cfg.score,
            )
            for groups in EstimationService.dml_specifications(cfg, dataset):
                result = estimate_effect(
                    dataset, dataset.outcome_name, dataset.treatment_name, groups, dml_cfg, n_jobs
                )
                label = DML_LABELS[estimator]
                if cfg.group_sweep:
                    label = f"{label}:{groups[0]}"
                builder.add_dml(label, estimator, result, groups)

        table = builder.build(config={
            "run": cfg.echo(),
            "panel": dataset.to_dict(),
            "dropped_controls": dropped,
        })
        json_path, text_path = RegressionTableWriter().write(table, output_dir)
        return {"table_json": json_path, "table_text": text_path}
