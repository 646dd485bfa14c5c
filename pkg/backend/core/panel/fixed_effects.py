import logging
from typing import List

import numpy as np

from .exceptions import PanelValidationError
from .panel_elements import PanelDataset, FixedEffectDesign, ordinal_levels

logger = logging.getLogger(__name__)


class FixedEffectEncoder:
    """
    Codificación drop-first con intercepto explícito: el primer nivel ordinal de cada factor es la referencia.
    """

    INTERCEPT = "intercept"

    @staticmethod
    def encode(dataset: PanelDataset) -> FixedEffectDesign:
        entity_levels = ordinal_levels(dataset.entity_ids)
        period_levels = ordinal_levels(dataset.period_ids)

        if len(entity_levels) < 2 or len(period_levels) < 2:
            raise PanelValidationError(
                f"fixed effects need J >= 2 and T >= 2, got J={len(entity_levels)}, T={len(period_levels)}",
                dataset.source_name
            )

        n = dataset.n_obs
        n_entity = len(entity_levels) - 1
        n_period = len(period_levels) - 1
        matrix = np.zeros((n, 1 + n_entity + n_period))
        matrix[:, 0] = 1.0

        entity_index = {level: i for i, level in enumerate(entity_levels)}
        period_index = {level: i for i, level in enumerate(period_levels)}
        rows = np.arange(n)

        entity_codes = np.array([entity_index[str(e)] for e in dataset.entity_ids])
        period_codes = np.array([period_index[str(t)] for t in dataset.period_ids])

        active = entity_codes > 0
        matrix[rows[active], entity_codes[active]] = 1.0
        active = period_codes > 0
        matrix[rows[active], n_entity + period_codes[active]] = 1.0

        column_names: List[str] = [FixedEffectEncoder.INTERCEPT]
        column_names += [f"entity[{level}]" for level in entity_levels[1:]]
        column_names += [f"period[{level}]" for level in period_levels[1:]]

        logger.debug(f"Encoded fixed effects: {matrix.shape[0]}x{matrix.shape[1]} "
                     f"(reference entity {entity_levels[0]}, reference period {period_levels[0]})")

        return FixedEffectDesign(
            matrix=matrix,
            column_names=tuple(column_names),
            entity_levels=tuple(entity_levels),
            period_levels=tuple(period_levels),
        )


def encode_fixed_effects(dataset: PanelDataset) -> FixedEffectDesign:
    return FixedEffectEncoder.encode(dataset)
