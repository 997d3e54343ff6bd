"""FIRE (fast inertial relaxation engine) on a flat parameter vector."""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from ..core.errors import ContractViolation, NonFiniteError
from ..core.layers import EPS_NORM

logger = logging.getLogger(__name__)

GradientFn = Callable[[np.ndarray], tuple[float, np.ndarray]]
StopReason = Literal["max_iterations", "converged", "target_reached"]


class FireConfig(BaseModel):
    """FIRE hyperparameters; defaults are the values used to train the Argon model."""

    model_config = ConfigDict(frozen=True)

    n_min: int = 5
    f_inc: float = 1.1
    f_dec: float = 0.5
    alpha_start: float = 0.1
    f_alpha: float = 0.99
    dt_init: float = 0.001
    dt_max: float = 0.01
    i_max: int = 100_000
    pseudo_mass: float = 0.1

    @model_validator(mode="after")
    def _check_ranges(self) -> "FireConfig":
        if not 0 < self.f_dec < 1 < self.f_inc:
            raise ValueError(f"need 0 < f_dec < 1 < f_inc, got f_dec={self.f_dec}, f_inc={self.f_inc}")
        if not 0 < self.f_alpha < 1:
            raise ValueError(f"need 0 < f_alpha < 1, got {self.f_alpha}")
        if not 0 < self.dt_init <= self.dt_max:
            raise ValueError(f"need 0 < dt_init <= dt_max, got {self.dt_init}, {self.dt_max}")
        if not 0 < self.alpha_start <= 1:
            raise ValueError(f"need 0 < alpha_start <= 1, got {self.alpha_start}")
        if self.pseudo_mass <= 0:
            raise ValueError(f"pseudo_mass must be > 0, got {self.pseudo_mass}")
        if self.n_min < 0 or self.i_max < 0:
            raise ValueError("n_min and i_max must be non-negative")
        return self

    @classmethod
    def build(cls, **values) -> "FireConfig":
        try:
            return cls(**values)
        except ValidationError as exc:
            raise ContractViolation(f"invalid FIRE config: {exc}") from exc


@dataclass(frozen=True)
class FireState:
    """Position, velocity and the adaptive controls of one FIRE run."""

    params: np.ndarray
    velocity: np.ndarray
    dt: float
    alpha: float
    since_uphill: int = 0
    iteration: int = 0

    @classmethod
    def start(cls, x_init: np.ndarray, cfg: FireConfig) -> "FireState":
        x = np.array(x_init, dtype=np.float64)
        return cls(
            params=x,
            velocity=np.zeros_like(x),
            dt=cfg.dt_init,
            alpha=cfg.alpha_start,
        )


@dataclass
class FireResult:
    params: np.ndarray
    losses: list[float]
    state: FireState
    reason: StopReason
    resets: int = 0
    dt_trace: list[float] = field(default_factory=list)


def fire_update(state: FireState, force: np.ndarray, cfg: FireConfig) -> tuple[FireState, float]:
    """
    One FIRE iteration given the force F = -grad at the current position.

    Euler step of positions then velocities, power P = F.v, velocity mixing
    toward F, then acceleration (P > 0 for more than n_min steps) or an
    uphill reset (P <= 0). Returns the new state and P.
    """
    x = state.params + state.velocity * state.dt
    v = state.velocity + force / cfg.pseudo_mass * state.dt
    power = float(force @ v)

    since_uphill = state.since_uphill + 1
    f_norm = float(np.linalg.norm(force))
    if f_norm >= EPS_NORM:
        v = (1.0 - state.alpha) * v + state.alpha * float(np.linalg.norm(v)) * force / f_norm

    dt, alpha = state.dt, state.alpha
    if power > 0 and since_uphill > cfg.n_min:
        dt = min(dt * cfg.f_inc, cfg.dt_max)
        alpha = alpha * cfg.f_alpha
    if power <= 0:
        dt = dt * cfg.f_dec
        v = np.zeros_like(v)
        alpha = cfg.alpha_start
        since_uphill = 0

    new_state = replace(
        state,
        params=x,
        velocity=v,
        dt=dt,
        alpha=alpha,
        since_uphill=since_uphill,
        iteration=state.iteration + 1,
    )
    return new_state, power


def _window_converged(losses: list[float], window: int, tolerance: float) -> bool:
    if window <= 0 or len(losses) <= window:
        return False
    before = losses[-1 - window]
    change = abs(losses[-1] - before) / (window * max(abs(before), 1e-300))
    return change < tolerance


def fire_minimize(
    gradient_fn: GradientFn,
    x_init: np.ndarray,
    cfg: FireConfig,
    window: int = 0,
    tolerance: float = 0.0,
    target_loss: float | None = None,
    callback: Callable[[FireState, float], None] | None = None,
) -> FireResult:
    """
    Minimize a loss with FIRE starting from ``x_init``.

    ``gradient_fn`` maps a parameter vector to (loss, gradient). The run stops
    after ``cfg.i_max`` updates, when the mean relative loss change over the
    last ``window`` iterations drops below ``tolerance``, or when the loss
    reaches ``target_loss``. ``callback(state, loss)`` is invoked
    at every evaluated point.
    """
    state = FireState.start(x_init, cfg)
    losses: list[float] = []
    dt_trace: list[float] = []
    resets = 0

    while True:
        loss, grad = gradient_fn(state.params)
        grad = np.asarray(grad, dtype=np.float64)
        if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
            raise NonFiniteError(
                f"non-finite loss or gradient at FIRE iteration {state.iteration} (loss={loss})",
                iteration=state.iteration,
            )
        if grad.shape != state.params.shape:
            raise ContractViolation(
                f"gradient has shape {grad.shape}, parameters have {state.params.shape}"
            )

        losses.append(float(loss))
        dt_trace.append(state.dt)
        if callback is not None:
            callback(state, float(loss))

        if target_loss is not None and loss <= target_loss:
            reason: StopReason = "target_reached"
            break
        if _window_converged(losses, window, tolerance):
            reason = "converged"
            logger.warning(
                "FIRE stopped early at iteration %d: relative loss change below %g over %d iterations",
                state.iteration,
                tolerance,
                window,
            )
            break
        if state.iteration >= cfg.i_max:
            reason = "max_iterations"
            break

        state, power = fire_update(state, -grad, cfg)
        if power <= 0:
            resets += 1
            logger.debug("FIRE reset at iteration %d (P=%g, dt=%g)", state.iteration, power, state.dt)

    logger.info(
        "FIRE finished after %d iterations (%s), loss %.6g, %d resets",
        state.iteration,
        reason,
        losses[-1],
        resets,
    )
    return FireResult(
        params=state.params,
        losses=losses,
        state=state,
        reason=reason,
        resets=resets,
        dt_trace=dt_trace,
    )
