from backend.core.estimators.deep_wide.network import (
    DeepWideSpec,
    DeepWideParams,
    NetInputs,
    init_params,
    forward,
    predict,
    loss_and_gradient,
    save_params,
)
from backend.core.estimators.deep_wide.optimizer import TrainConfig, AdamState, adam_step
from backend.core.estimators.deep_wide.trainer import DeepWideTrainer, TrainTrace, train, warm_start_wide
from backend.core.estimators.deep_wide.exceptions import (
    DeepWideError,
    DimensionMismatchError,
    TrainingDivergedError,
)

__all__ = [
    'DeepWideSpec',
    'DeepWideParams',
    'NetInputs',
    'TrainConfig',
    'AdamState',
    'TrainTrace',
    'DeepWideTrainer',
    'init_params',
    'forward',
    'predict',
    'loss_and_gradient',
    'adam_step',
    'train',
    'warm_start_wide',
    'save_params',
    'DeepWideError',
    'DimensionMismatchError',
    'TrainingDivergedError',
]
