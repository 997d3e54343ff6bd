"""Full-batch training of an equivariant network with FIRE."""

import logging
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from ..core.errors import ContractViolation
from ..core.grad import backward, loss_mse, loss_normalizer
from ..core.layers import network_forward
from ..core.models import Network, NetworkConfig
from .fire import FireConfig, FireResult, FireState, fire_minimize
from .params import flatten_gradients, flatten_params, unflatten_params

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    """Controls of the training loop around FIRE."""

    model_config = ConfigDict(frozen=True)

    log_interval: int = 1000
    window: int = 1000
    tolerance: float = 1e-10
    target_loss: float | None = None

    @field_validator("log_interval")
    @classmethod
    def _positive_interval(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"log_interval must be >= 1, got {value}")
        return value

    @classmethod
    def build(cls, **values) -> "TrainConfig":
        try:
            return cls(**values)
        except ValidationError as exc:
            raise ContractViolation(f"invalid training config: {exc}") from exc


@dataclass(frozen=True)
class TrainingData:
    """Standardized training and validation batches, shape (samples, n + m, M)."""

    x_train: np.ndarray
    t_train: np.ndarray
    x_val: np.ndarray
    t_val: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self) -> None:
        if len(self.x_train) == 0:
            raise ContractViolation("training split is empty")
        if len(self.x_train) != len(self.t_train) or len(self.x_val) != len(self.t_val):
            raise ContractViolation(
                f"inputs and targets disagree in sample count: train "
                f"{len(self.x_train)}/{len(self.t_train)}, val {len(self.x_val)}/{len(self.t_val)}"
            )


@dataclass(frozen=True)
class HistoryRow:
    iteration: int
    train_loss: float
    val_loss: float


@dataclass
class TrainResult:
    network: Network
    history: list[HistoryRow]
    fire: FireResult
    normalizer: int

    @property
    def final_train_loss(self) -> float:
        return self.history[-1].train_loss

    @property
    def final_val_loss(self) -> float:
        return self.history[-1].val_loss


def xavier_init(config: NetworkConfig, rng: np.random.Generator) -> Network:
    """
    Normalized Xavier weights, uniform in +-sqrt(6)/sqrt(M_k + M_k+1); zero biases.

    Complex networks draw the real and imaginary parts independently.
    """
    weights, biases = [], []
    for rows, cols in config.layer_shapes:
        limit = np.sqrt(6.0) / np.sqrt(rows + cols)
        W = rng.uniform(-limit, limit, size=(rows, cols))
        if config.field == "complex":
            W = W + 1j * rng.uniform(-limit, limit, size=(rows, cols))
        weights.append(W)
        biases.append(np.zeros((rows, cols), dtype=config.dtype))
    return Network.from_matrices(config, weights, biases)


def evaluate_loss(net: Network, x: np.ndarray, t: np.ndarray, mask: np.ndarray | None = None) -> float:
    if len(x) == 0:
        return float("nan")
    output, _ = network_forward(x, net)
    return loss_mse(output, t, mask)


def train(
    net: Network,
    data: TrainingData,
    fire_cfg: FireConfig,
    train_cfg: TrainConfig | None = None,
) -> TrainResult:
    """
    Minimize the training MSE over every training sample at each FIRE step.

    Validation loss is sampled every ``log_interval`` iterations and at the
    final iteration.
    """
    train_cfg = train_cfg or TrainConfig()
    config = net.config
    history: list[HistoryRow] = []

    def gradient_fn(vector: np.ndarray) -> tuple[float, np.ndarray]:
        candidate = unflatten_params(vector, config)
        loss, grads = backward(candidate, data.x_train, data.t_train, data.mask)
        return loss, flatten_gradients(grads, config)

    last_logged = {"iteration": -1}

    def record(state: FireState, loss: float) -> None:
        iteration = state.iteration
        if iteration % train_cfg.log_interval != 0:
            return
        val = evaluate_loss(unflatten_params(state.params, config), data.x_val, data.t_val, data.mask)
        history.append(HistoryRow(iteration, loss, val))
        last_logged["iteration"] = iteration
        logger.info(
            "iteration %d train_loss %.6e val_loss %.6e dt %.4g alpha %.4g",
            iteration,
            loss,
            val,
            state.dt,
            state.alpha,
        )

    result = fire_minimize(
        gradient_fn,
        flatten_params(net),
        fire_cfg,
        window=train_cfg.window,
        tolerance=train_cfg.tolerance,
        target_loss=train_cfg.target_loss,
        callback=record,
    )

    trained = unflatten_params(result.params, config)
    if last_logged["iteration"] != result.state.iteration:
        final_train = evaluate_loss(trained, data.x_train, data.t_train, data.mask)
        final_val = evaluate_loss(trained, data.x_val, data.t_val, data.mask)
        history.append(HistoryRow(result.state.iteration, final_train, final_val))

    return TrainResult(
        network=trained,
        history=history,
        fire=result,
        normalizer=loss_normalizer(data.t_train.shape, data.mask),
    )
