"""Equivariant network core: vector-batch algebra, layers and gradients."""

from .errors import (
    ContractViolation,
    EnnError,
    NonFiniteError,
    PropertySuiteFailure,
    StorageError,
)
from .grad import backward, finite_difference_gradients, loss_mse, loss_normalizer
from .group import act, block_operator, random_rotation, random_unitary
from .layers import (
    EPS_NORM,
    apply_activation,
    augment_features,
    layer_forward,
    network_forward,
    normalize_columns,
)
from .models import ForwardCache, Gradients, LayerParams, Network, NetworkConfig

__all__ = [
    "ContractViolation",
    "EnnError",
    "NonFiniteError",
    "PropertySuiteFailure",
    "StorageError",
    "backward",
    "finite_difference_gradients",
    "loss_mse",
    "loss_normalizer",
    "act",
    "block_operator",
    "random_rotation",
    "random_unitary",
    "EPS_NORM",
    "apply_activation",
    "augment_features",
    "layer_forward",
    "network_forward",
    "normalize_columns",
    "ForwardCache",
    "Gradients",
    "LayerParams",
    "Network",
    "NetworkConfig",
]
