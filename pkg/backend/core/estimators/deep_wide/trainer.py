import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, Tuple

import numpy as np
from scipy import linalg

from backend.core.seeding import derive_seed
from .exceptions import TrainingDivergedError, DimensionMismatchError
from .network import DeepWideSpec, DeepWideParams, NetInputs, init_params, loss_and_gradient, predict
from .optimizer import TrainConfig, AdamState, adam_step

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainTrace:
    """Pérdidas MAE por época (sin penalización) y época seleccionada (0 si no hubo entrenamiento)."""
    train_losses: Tuple[float, ...]
    validation_losses: Tuple[float, ...]
    selected_epoch: int
    stopped_early: bool = False

    @property
    def epochs_run(self) -> int:
        return len(self.train_losses)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "train_losses": list(self.train_losses),
            "validation_losses": list(self.validation_losses),
            "selected_epoch": self.selected_epoch,
            "epochs_run": self.epochs_run,
            "stopped_early": self.stopped_early,
        }


def warm_start_wide(params: DeepWideParams, rows: NetInputs, targets: np.ndarray) -> DeepWideParams:
    """
    Pesos anchos y sesgo de salida por mínimos cuadrados de los objetivos sobre las dummies.

    Con merge en cero el camino profundo no aporta, así que la red parte del ajuste de efectos fijos.
    Las dummies sin filas reciben peso 0 (solución de norma mínima).
    """
    design = np.hstack([np.ones((rows.n_rows, 1)), rows.fixed_effects])
    solution, _, _, _ = linalg.lstsq(design, targets)
    return replace(params, wide_weights=solution[1:], output_bias=float(solution[0]))


class DeepWideTrainer:
    """
    Entrena la red deep-wide con Adam sobre mini-lotes barajados de forma determinista.

    Selección de época: parada temprana con paciencia sobre la pérdida de validación; entre las épocas
    cuya pérdida de validación queda dentro de selection_tolerance de la mejor, se elige la que minimiza
    |pérdida de entrenamiento - pérdida de validación|.
    """

    def __init__(self, spec: DeepWideSpec, cfg: TrainConfig):
        self.spec = spec
        self.cfg = cfg

    def fit(self,
            train: NetInputs,
            validation: NetInputs,
            train_targets: np.ndarray,
            validation_targets: np.ndarray) -> Tuple[DeepWideParams, TrainTrace]:
        train_targets = np.asarray(train_targets, dtype=float).reshape(-1)
        validation_targets = np.asarray(validation_targets, dtype=float).reshape(-1)

        if train.n_rows == 0 or validation.n_rows == 0:
            raise ValueError("train and validation samples must be non-empty")
        if train_targets.shape[0] != train.n_rows:
            raise DimensionMismatchError("train targets", train.n_rows, train_targets.shape[0])
        if validation_targets.shape[0] != validation.n_rows:
            raise DimensionMismatchError("validation targets", validation.n_rows, validation_targets.shape[0])

        cfg = self.cfg
        params = init_params(
            self.spec,
            train.controls.shape[1],
            train.fixed_effects.shape[1],
            derive_seed(cfg.seed, 0),
        )
        if cfg.wide_warm_start and cfg.max_epochs > 0:
            params = warm_start_wide(params, train, train_targets)
        shuffle_rng = np.random.default_rng(derive_seed(cfg.seed, 1))
        state = AdamState.zeros_like(params)

        train_losses = []
        validation_losses = []
        candidates: Dict[int, Tuple[DeepWideParams, float, float]] = {}
        best_validation = np.inf
        since_best = 0
        step = 0
        stopped_early = False
        tolerance = 1.0 + cfg.selection_tolerance

        for epoch in range(1, cfg.max_epochs + 1):
            order = shuffle_rng.permutation(train.n_rows)
            for start in range(0, train.n_rows, cfg.batch_size):
                rows = order[start:start + cfg.batch_size]
                loss, grads = loss_and_gradient(
                    params, self.spec, train.take(rows), train_targets[rows], self.spec.l2_penalty
                )
                if not np.isfinite(loss):
                    raise TrainingDivergedError(epoch, loss)
                step += 1
                params, state = adam_step(params, grads, state, step, cfg)

            train_loss = float(np.mean(np.abs(predict(params, self.spec, train) - train_targets)))
            validation_loss = float(np.mean(np.abs(predict(params, self.spec, validation) - validation_targets)))
            if not (np.isfinite(train_loss) and np.isfinite(validation_loss)):
                raise TrainingDivergedError(epoch, train_loss if not np.isfinite(train_loss) else validation_loss)

            train_losses.append(train_loss)
            validation_losses.append(validation_loss)

            if validation_loss < best_validation:
                best_validation = validation_loss
                since_best = 0
                candidates = {
                    e: c for e, c in candidates.items() if c[2] <= tolerance * best_validation
                }
            else:
                since_best += 1

            if validation_loss <= tolerance * best_validation:
                candidates[epoch] = (params, train_loss, validation_loss)

            if since_best >= cfg.patience:
                stopped_early = True
                logger.debug(f"Early stop at epoch {epoch} (best validation MAE {best_validation:.6f})")
                break

        if not candidates:
            trace = TrainTrace((), (), selected_epoch=0)
            return params, trace

        selected = min(candidates, key=lambda e: (abs(candidates[e][1] - candidates[e][2]), e))
        trace = TrainTrace(
            train_losses=tuple(train_losses),
            validation_losses=tuple(validation_losses),
            selected_epoch=selected,
            stopped_early=stopped_early,
        )
        logger.debug(f"Selected epoch {selected} of {trace.epochs_run} "
                     f"(train MAE {candidates[selected][1]:.6f}, validation MAE {candidates[selected][2]:.6f})")
        return candidates[selected][0], trace


def train(spec: DeepWideSpec,
          cfg: TrainConfig,
          train_rows: NetInputs,
          validation_rows: NetInputs,
          train_targets: np.ndarray,
          validation_targets: np.ndarray) -> Tuple[DeepWideParams, TrainTrace]:
    return DeepWideTrainer(spec, cfg).fit(train_rows, validation_rows, train_targets, validation_targets)
