"""FIRE minimization, parameter flattening and the training loop."""

from .fire import FireConfig, FireResult, FireState, fire_minimize, fire_update
from .params import flatten_gradients, flatten_params, parameter_count, unflatten_params
from .training import (
    HistoryRow,
    TrainConfig,
    TrainingData,
    TrainResult,
    evaluate_loss,
    train,
    xavier_init,
)

__all__ = [
    "FireConfig",
    "FireResult",
    "FireState",
    "fire_minimize",
    "fire_update",
    "flatten_gradients",
    "flatten_params",
    "parameter_count",
    "unflatten_params",
    "HistoryRow",
    "TrainConfig",
    "TrainingData",
    "TrainResult",
    "evaluate_loss",
    "train",
    "xavier_init",
]
