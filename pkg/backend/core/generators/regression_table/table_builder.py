import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy import stats

from backend.core.panel import PanelDataset, encode_fixed_effects
from backend.core.estimators.linear import ClusterSpec, OLSFit, ols_clustered
from backend.core.estimators.dml import DMLResult
from .table_elements import RegressionTable, TableColumn

logger = logging.getLogger(__name__)

STANDARD_GROUP = "standard"


def ols_fixed_effects(dataset: PanelDataset, control_names: Sequence[str] = ()) -> OLSFit:
    """
    OLS del resultado sobre tratamiento + controles + efectos fijos de entidad y periodo, SE agrupados por entidad.
    """
    fixed_effects = encode_fixed_effects(dataset)
    columns = [dataset.column(name) for name in control_names]
    design = np.column_stack([dataset.treatment, *columns, fixed_effects.matrix])
    names = [dataset.treatment_name, *control_names, *fixed_effects.column_names]
    return ols_clustered(design, dataset.outcome, ClusterSpec(dataset.entity_ids), names)


class RegressionTableBuilder:
    """
    Ensambla columnas OLS-FE y DML sobre un mismo panel en una tabla de regresión.
    """

    def __init__(self, dataset: PanelDataset):
        self.dataset = dataset
        self.columns: List[TableColumn] = []
        self.notes: List[str] = []

    @property
    def standard_controls(self) -> List[str]:
        return self.dataset.columns_in_groups([STANDARD_GROUP])

    def add_ols(self, label: str, with_standard_controls: bool = False) -> Optional[TableColumn]:
        controls: List[str] = []
        if with_standard_controls:
            controls = self.standard_controls
            if not controls:
                message = f"Column '{label}' skipped: no '{STANDARD_GROUP}' controls in panel"
                logger.warning(message)
                self.notes.append(message)
                return None

        fit = ols_fixed_effects(self.dataset, controls)
        theta = fit.coefficient(self.dataset.treatment_name)
        se = fit.standard_error(self.dataset.treatment_name)
        p_value = float(2.0 * stats.t.sf(abs(theta / se), fit.n_clusters - 1))

        column = TableColumn(
            label=label,
            estimator="ols",
            theta=theta,
            standard_error=se,
            p_value=p_value,
            n_obs=fit.n_obs,
            groups=(STANDARD_GROUP,) if controls else (),
            standard_controls=bool(controls),
            clustered=True,
            n_clusters=fit.n_clusters,
            details={"n_controls": len(controls), "n_params": fit.n_params},
        )
        self.columns.append(column)
        logger.info(f"{label}: theta={theta:.6f} (se {se:.6f}, {fit.n_clusters} clusters)")
        return column

    def add_dml(self, label: str, estimator: str, result: DMLResult, groups: Iterable[str]) -> TableColumn:
        groups = tuple(sorted(groups))
        column = TableColumn(
            label=label,
            estimator=estimator,
            theta=result.theta_median,
            standard_error=result.standard_error,
            p_value=result.p_value,
            n_obs=result.n_obs,
            groups=groups,
            standard_controls=STANDARD_GROUP in groups,
            clustered=False,
            details=result.to_dict(),
        )
        self.columns.append(column)
        return column

    def build(self, config: Optional[Dict[str, Any]] = None) -> RegressionTable:
        group_rows = tuple(
            g for g in self.dataset.groups
            if g != STANDARD_GROUP or any(STANDARD_GROUP in c.groups for c in self.columns)
        )
        return RegressionTable(
            outcome=self.dataset.outcome_name,
            treatment=self.dataset.treatment_name,
            columns=tuple(self.columns),
            group_rows=group_rows,
            config=config or {},
            notes=tuple(self.notes),
        )
