"""Data models for equivariant networks and their gradients."""

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from .errors import ContractViolation

ActivationKind = Literal["softsign_residue", "identity"]
ScalarField = Literal["real", "complex"]

# A vector batch is an ndarray of shape (..., n + m, M): the trailing two axes
# hold M column vectors; leading axes index samples.
VectorBatch = np.ndarray

DEFAULT_RESIDUE = 0.01


class NetworkConfig(BaseModel):
    """Architecture of an equivariant feedforward network."""

    model_config = ConfigDict(frozen=True)

    n: int
    m: int = 0
    widths: tuple[int, ...]
    activations: tuple[ActivationKind, ...]
    residue_a: float = DEFAULT_RESIDUE
    field: ScalarField = "real"

    @field_validator("n")
    @classmethod
    def _positive_dimension(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"vector dimension n must be >= 1, got {value}")
        return value

    @field_validator("m")
    @classmethod
    def _non_negative_features(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"feature count m must be >= 0, got {value}")
        return value

    @field_validator("residue_a")
    @classmethod
    def _non_negative_residue(cls, value: float) -> float:
        if value < 0:
            raise ValueError(f"residue_a must be >= 0, got {value}")
        return value

    @model_validator(mode="after")
    def _consistent_layers(self) -> "NetworkConfig":
        if len(self.widths) < 2:
            raise ValueError(f"widths needs at least 2 entries, got {list(self.widths)}")
        if any(w < 1 for w in self.widths):
            raise ValueError(f"every width must be >= 1, got {list(self.widths)}")
        if len(self.activations) != len(self.widths) - 1:
            raise ValueError(
                f"expected {len(self.widths) - 1} activations for widths "
                f"{list(self.widths)}, got {len(self.activations)}"
            )
        return self

    @property
    def dim(self) -> int:
        """Working dimension n + m of every layer."""
        return self.n + self.m

    @property
    def depth(self) -> int:
        return len(self.widths) - 1

    @property
    def dtype(self) -> type:
        return np.complex128 if self.field == "complex" else np.float64

    @property
    def layer_shapes(self) -> list[tuple[int, int]]:
        return [(self.widths[k], self.widths[k + 1]) for k in range(self.depth)]

    @classmethod
    def build(
        cls,
        n: int,
        widths: Sequence[int],
        activations: Sequence[str] | None = None,
        m: int = 0,
        residue_a: float = DEFAULT_RESIDUE,
        field: str = "real",
    ) -> "NetworkConfig":
        """
        Validate and construct a config, raising ContractViolation on bad input.

        Without explicit activations every hidden layer uses softsign_residue
        and the output layer is the identity.
        """
        widths = tuple(int(w) for w in widths)
        if activations is None:
            depth = max(len(widths) - 1, 0)
            activations = ["softsign_residue"] * max(depth - 1, 0) + ["identity"] * min(depth, 1)
        try:
            return cls(
                n=n,
                m=m,
                widths=widths,
                activations=tuple(activations),
                residue_a=residue_a,
                field=field,
            )
        except ValidationError as exc:
            raise ContractViolation(f"invalid network config: {exc}") from exc


@dataclass(frozen=True)
class LayerParams:
    """Weight and bias matrices of one layer, both M_k x M_{k+1}."""

    W: np.ndarray
    b: np.ndarray
    activation: ActivationKind = "identity"
    residue_a: float = DEFAULT_RESIDUE

    def __post_init__(self) -> None:
        if self.W.ndim != 2 or self.W.shape != self.b.shape:
            raise ContractViolation(
                f"W and b must be matrices of equal shape, got {self.W.shape} and {self.b.shape}"
            )
        if self.residue_a < 0:
            raise ContractViolation(f"residue_a must be >= 0, got {self.residue_a}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.W.shape


@dataclass(frozen=True)
class Network:
    """An immutable equivariant network: config plus one LayerParams per layer."""

    config: NetworkConfig
    layers: tuple[LayerParams, ...]

    def __post_init__(self) -> None:
        shapes = self.config.layer_shapes
        if len(self.layers) != len(shapes):
            raise ContractViolation(
                f"expected {len(shapes)} layers for widths {list(self.config.widths)}, "
                f"got {len(self.layers)}"
            )
        for k, (layer, expected) in enumerate(zip(self.layers, shapes)):
            if layer.shape != expected:
                raise ContractViolation(
                    f"layer {k}: expected shape {expected}, got {layer.shape}"
                )

    @classmethod
    def from_matrices(
        cls,
        config: NetworkConfig,
        weights: Sequence[np.ndarray],
        biases: Sequence[np.ndarray],
    ) -> "Network":
        layers = tuple(
            LayerParams(
                W=np.array(W, dtype=config.dtype),
                b=np.array(b, dtype=config.dtype),
                activation=kind,
                residue_a=config.residue_a,
            )
            for W, b, kind in zip(weights, biases, config.activations)
        )
        return cls(config=config, layers=layers)

    @classmethod
    def zeros(cls, config: NetworkConfig) -> "Network":
        shapes = config.layer_shapes
        return cls.from_matrices(
            config,
            [np.zeros(s, dtype=config.dtype) for s in shapes],
            [np.zeros(s, dtype=config.dtype) for s in shapes],
        )


@dataclass
class ForwardCache:
    """Per-call record of every layer input x_k and pre-activation y_k."""

    xs: list[np.ndarray] = field(default_factory=list)
    ys: list[np.ndarray] = field(default_factory=list)
    es: list[np.ndarray] = field(default_factory=list)


@dataclass(frozen=True)
class Gradients:
    """Per-layer (dW, db) pairs mirroring the owning network's shapes."""

    dW: tuple[np.ndarray, ...]
    db: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.dW) != len(self.db):
            raise ContractViolation(
                f"dW and db must have equal layer counts, got {len(self.dW)} and {len(self.db)}"
            )

    def max_abs(self) -> float:
        return max(
            (float(np.max(np.abs(g))) for g in (*self.dW, *self.db) if g.size),
            default=0.0,
        )

    def norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(np.abs(g) ** 2)) for g in (*self.dW, *self.db))))

    def is_finite(self) -> bool:
        return all(bool(np.all(np.isfinite(g))) for g in (*self.dW, *self.db))
