import logging
from typing import Sequence

import numpy as np

from .exceptions import SplitError, EmptyPanelError, PanelSchemaError
from .panel_elements import PanelDataset, CrossFitSplit, TrainValSplit, COUNTY_CLASSES

logger = logging.getLogger(__name__)

VALIDATION_SHARE = 0.2


class PanelSplitter:
    """
    Particiones deterministas de filas: cross-fitting, entrenamiento/validación y submuestras por clase.
    """

    @staticmethod
    def split_crossfit(n: int, seed: int) -> CrossFitSplit:
        """
        Divide n filas en dos mitades al azar, uniforme sobre filas (sin estratificar por entidad ni periodo).
        """
        if n < 2:
            raise SplitError(f"cross-fit split needs n >= 2, got {n}")

        permutation = np.random.default_rng(seed).permutation(n)
        half = (n + 1) // 2
        return CrossFitSplit(
            main=np.sort(permutation[:half]),
            auxiliary=np.sort(permutation[half:]),
        )

    @staticmethod
    def split_train_val(rows: Sequence[int], seed: int) -> TrainValSplit:
        """
        Separa ~20% de las filas para validación: round(0.2 n) con redondeo hacia arriba en .5.
        """
        rows = np.asarray(rows, dtype=int)
        n = len(rows)
        if n < 5:
            raise SplitError(f"train/validation split needs at least 5 rows, got {n}")

        n_validation = int(np.floor(VALIDATION_SHARE * n + 0.5))
        permutation = np.random.default_rng(seed).permutation(n)
        return TrainValSplit(
            train=np.sort(rows[permutation[n_validation:]]),
            validation=np.sort(rows[permutation[:n_validation]]),
        )

    @staticmethod
    def subset_by_class(dataset: PanelDataset, county_class: str) -> PanelDataset:
        """
        Conserva las filas cuyas entidades tienen la clase indicada. No re-estandariza.
        """
        if county_class not in COUNTY_CLASSES:
            raise PanelSchemaError(f"class must be one of {list(COUNTY_CLASSES)}", county_class, dataset.source_name)

        rows = np.flatnonzero(dataset.row_classes() == county_class)
        if len(rows) == 0:
            raise EmptyPanelError(f"No rows with class '{county_class}'", dataset.source_name)

        subset = dataset.take(rows)
        logger.info(f"Subset '{county_class}': N={subset.n_obs}, J={subset.n_entities}, T={subset.n_periods}")
        return subset


def split_crossfit(n: int, seed: int) -> CrossFitSplit:
    return PanelSplitter.split_crossfit(n, seed)


def split_train_val(rows: Sequence[int], seed: int) -> TrainValSplit:
    return PanelSplitter.split_train_val(rows, seed)


def subset_by_class(dataset: PanelDataset, county_class: str) -> PanelDataset:
    return PanelSplitter.subset_by_class(dataset, county_class)
