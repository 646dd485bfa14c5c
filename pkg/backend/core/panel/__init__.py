from typing import Optional, Tuple, Union
from pathlib import Path

from backend.core.panel.panel_elements import (
    PanelDataset,
    StandardizationStats,
    FixedEffectDesign,
    CrossFitSplit,
    TrainValSplit,
    RowRejection,
    CONTROL_GROUP_TAGS,
    COUNTY_CLASSES,
    ordinal_levels,
)
from backend.core.panel.panel_loader import PanelLoader, PanelSchema, load_csv
from backend.core.panel.panel_normalizer import PanelNormalizer, standardize, unstandardize, drop_constant_controls
from backend.core.panel.fixed_effects import FixedEffectEncoder, encode_fixed_effects
from backend.core.panel.panel_splitter import PanelSplitter, split_crossfit, split_train_val, subset_by_class
from backend.core.panel.exceptions import (
    PanelDataError,
    PanelValidationError,
    DuplicateRowError,
    NonNumericValueError,
    PanelSchemaError,
    ZeroVarianceError,
    EmptyPanelError,
    SplitError,
)

__version__ = "1.0.0"
__all__ = [
    'PanelDataset',
    'StandardizationStats',
    'FixedEffectDesign',
    'CrossFitSplit',
    'TrainValSplit',
    'RowRejection',
    'CONTROL_GROUP_TAGS',
    'COUNTY_CLASSES',
    'ordinal_levels',
    'PanelLoader',
    'PanelSchema',
    'PanelNormalizer',
    'FixedEffectEncoder',
    'PanelSplitter',
    'load_csv',
    'standardize',
    'unstandardize',
    'drop_constant_controls',
    'encode_fixed_effects',
    'split_crossfit',
    'split_train_val',
    'subset_by_class',
    'load_panel',
    'PanelDataError',
    'PanelValidationError',
    'DuplicateRowError',
    'NonNumericValueError',
    'PanelSchemaError',
    'ZeroVarianceError',
    'EmptyPanelError',
    'SplitError',
]


def load_panel(csv_path: Union[str, Path],
               schema: Union[PanelSchema, str, Path],
               county_class: Optional[str] = None) -> Tuple[PanelDataset, StandardizationStats]:
    """
    Función de conveniencia: carga, filtra por clase (opcional) y estandariza todas las columnas.

    Tras filtrar, la estandarización se calcula dentro de la submuestra.
    """
    dataset = load_csv(csv_path, schema)

    if county_class and county_class != "all":
        dataset = subset_by_class(dataset, county_class)

    return standardize(dataset)
