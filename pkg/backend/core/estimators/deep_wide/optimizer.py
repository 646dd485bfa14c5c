from __future__ import annotations
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .network import DeepWideParams


class TrainConfig(BaseModel):
    """Hiperparámetros del optimizador de momentos adaptativos y del bucle de entrenamiento."""
    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=0.001, gt=0.0)
    moment1_decay: float = Field(default=0.9, gt=0.0, lt=1.0)
    moment2_decay: float = Field(default=0.999, gt=0.0, lt=1.0)
    epsilon: float = Field(default=1e-8, gt=0.0)
    batch_size: int = Field(default=64, ge=1)
    max_epochs: int = Field(default=500, ge=0)
    patience: int = Field(default=25, ge=1)
    selection_tolerance: float = Field(default=0.05, ge=0.0)
    loss: str = Field(default="mae", pattern="^mae$")
    wide_warm_start: bool = True
    seed: int = 0


@dataclass(frozen=True)
class AdamState:
    """Acumuladores de primer y segundo momento, con la misma forma que los parámetros."""
    first_moment: Tuple[np.ndarray, ...]
    second_moment: Tuple[np.ndarray, ...]

    @classmethod
    def zeros_like(cls, params: DeepWideParams) -> AdamState:
        arrays = params.arrays()
        return cls(
            first_moment=tuple(np.zeros_like(a) for a in arrays),
            second_moment=tuple(np.zeros_like(a) for a in arrays),
        )


def adam_step(params: DeepWideParams,
              grads: DeepWideParams,
              state: AdamState,
              t: int,
              cfg: TrainConfig) -> Tuple[DeepWideParams, AdamState]:
    """
    Un paso de Adam con corrección de sesgo. t es el índice de paso, empezando en 1.
    """
    if t < 1:
        raise ValueError(f"step index must be >= 1, got {t}")

    beta1, beta2 = cfg.moment1_decay, cfg.moment2_decay
    correction1 = 1.0 - beta1 ** t
    correction2 = 1.0 - beta2 ** t

    new_params = []
    new_first = []
    new_second = []
    for value, grad, m, v in zip(params.arrays(), grads.arrays(), state.first_moment, state.second_moment):
        m = beta1 * m + (1.0 - beta1) * grad
        v = beta2 * v + (1.0 - beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        new_params.append(value - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon))
        new_first.append(m)
        new_second.append(v)

    return DeepWideParams.from_arrays(new_params), AdamState(tuple(new_first), tuple(new_second))
