from dataclasses import replace
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .exceptions import ZeroVarianceError, PanelSchemaError
from .panel_elements import PanelDataset, StandardizationStats

# Desviación estándar muestral: denominador N-1 en todo el paquete
DDOF = 1
ZERO_VARIANCE_TOLERANCE = 1e-14


def _has_variance(values: np.ndarray) -> bool:
    if len(values) < 2:
        return False
    std = float(np.std(values, ddof=DDOF))
    return std > ZERO_VARIANCE_TOLERANCE * max(1.0, abs(float(np.mean(values))))


class PanelNormalizer:
    """
    Estandariza columnas del panel a media 0 y desviación estándar muestral 1.
    """

    @staticmethod
    def standardize(dataset: PanelDataset,
                    columns: Optional[Iterable[str]] = None) -> Tuple[PanelDataset, StandardizationStats]:
        """
        Estandariza las columnas seleccionadas (todas si columns es None).
        """
        selected = list(dataset.column_names if columns is None else columns)
        means: Dict[str, float] = {}
        stds: Dict[str, float] = {}

        for name in selected:
            values = dataset.column(name)
            if not _has_variance(values):
                raise ZeroVarianceError(name)
            means[name] = float(np.mean(values))
            stds[name] = float(np.std(values, ddof=DDOF))

        stats = StandardizationStats(means=means, stds=stds)
        return PanelNormalizer.apply(dataset, stats), stats

    @staticmethod
    def drop_constant_controls(dataset: PanelDataset) -> Tuple[PanelDataset, List[str]]:
        """
        Quita los controles sin variación (p. ej. constantes dentro de una submuestra por clase).
        """
        dropped = [name for name in dataset.control_names if not _has_variance(dataset.column(name))]
        if not dropped:
            return dataset, []
        kept = [name for name in dataset.control_names if name not in dropped]
        return dataset.with_roles(dataset.outcome_name, dataset.treatment_name, kept), dropped

    @staticmethod
    def apply(dataset: PanelDataset, stats: StandardizationStats) -> PanelDataset:
        return PanelNormalizer._transform(dataset, stats, inverse=False)

    @staticmethod
    def unstandardize(dataset: PanelDataset, stats: StandardizationStats) -> PanelDataset:
        return PanelNormalizer._transform(dataset, stats, inverse=True)

    @staticmethod
    def _transform(dataset: PanelDataset, stats: StandardizationStats, inverse: bool) -> PanelDataset:
        def convert(name: str, values: np.ndarray) -> np.ndarray:
            if name not in stats.means:
                return values
            mean, std = stats.means[name], stats.stds[name]
            if inverse:
                return values * std + mean
            return (values - mean) / std

        for name in stats.means:
            if name not in dataset.column_names:
                raise PanelSchemaError("standardization stats refer to an unknown column", name, dataset.source_name)

        controls = dataset.controls.copy()
        for j, name in enumerate(dataset.control_names):
            controls[:, j] = convert(name, controls[:, j])

        return replace(
            dataset,
            outcome=convert(dataset.outcome_name, dataset.outcome),
            treatment=convert(dataset.treatment_name, dataset.treatment),
            controls=controls,
        )


def standardize(dataset: PanelDataset,
                columns: Optional[Iterable[str]] = None) -> Tuple[PanelDataset, StandardizationStats]:
    return PanelNormalizer.standardize(dataset, columns)


def drop_constant_controls(dataset: PanelDataset) -> Tuple[PanelDataset, List[str]]:
    return PanelNormalizer.drop_constant_controls(dataset)


def unstandardize(dataset: PanelDataset, stats: StandardizationStats) -> PanelDataset:
    return PanelNormalizer.unstandardize(dataset, stats)
