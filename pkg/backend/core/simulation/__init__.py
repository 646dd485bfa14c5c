from pathlib import Path
from typing import Union

from backend.core.simulation.dgp import DGPConfig, DGPDraw, draw_dgp
from backend.core.simulation.kde import KDECurve, kde, silverman_bandwidth
from backend.core.simulation.experiment import (
    ESTIMATORS,
    BiasReport,
    BiasSummary,
    ReplicationFailure,
    ExperimentSetup,
    ols_subset_theta,
    run_replication,
    run_experiment,
)
from backend.core.simulation.exporter import ExportPaths, export_dgp_csv
from backend.core.simulation.exceptions import (
    SimulationError,
    ReplicationFailureError,
    KDEError,
    ExportError,
)

__version__ = "1.0.0"
__all__ = [
    'DGPConfig',
    'DGPDraw',
    'KDECurve',
    'BiasReport',
    'BiasSummary',
    'ReplicationFailure',
    'ExperimentSetup',
    'ExportPaths',
    'ESTIMATORS',
    'draw_dgp',
    'kde',
    'silverman_bandwidth',
    'ols_subset_theta',
    'run_replication',
    'run_experiment',
    'export_dgp_csv',
    'generate_panel',
    'SimulationError',
    'ReplicationFailureError',
    'KDEError',
    'ExportError',
]


def generate_panel(cfg: DGPConfig,
                   path: Union[str, Path],
                   replication: int = 0) -> ExportPaths:
    """
    Función de conveniencia: una extracción del DGP exportada a CSV con esquema y archivo de verdad.
    """
    return export_dgp_csv(draw_dgp(cfg, replication), path)
