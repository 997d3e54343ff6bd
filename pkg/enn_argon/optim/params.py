"""
Canonical flattening of network parameters into one real vector.

Order: layer-major; within a layer W before b; row-major within each
matrix. Complex entries contribute two consecutive reals (real, imag).
"""

import numpy as np

from ..core.errors import ContractViolation
from ..core.models import Gradients, Network, NetworkConfig


def parameter_count(config: NetworkConfig) -> int:
    per_entry = 2 if config.field == "complex" else 1
    return per_entry * sum(2 * rows * cols for rows, cols in config.layer_shapes)


def _as_reals(matrix: np.ndarray) -> np.ndarray:
    contiguous = np.ascontiguousarray(matrix)
    if np.iscomplexobj(contiguous):
        return contiguous.astype(np.complex128, copy=False).view(np.float64).ravel()
    return contiguous.astype(np.float64, copy=False).ravel()


def _flatten_pairs(pairs, field: str) -> np.ndarray:
    chunks = []
    for W, b in pairs:
        for matrix in (W, b):
            if field == "real" and np.iscomplexobj(matrix):
                matrix = np.real(matrix)
            chunks.append(_as_reals(matrix))
    return np.concatenate(chunks) if chunks else np.zeros(0)


def flatten_params(net: Network) -> np.ndarray:
    return _flatten_pairs(((layer.W, layer.b) for layer in net.layers), net.config.field)


def flatten_gradients(grads: Gradients, config: NetworkConfig) -> np.ndarray:
    """Gradients in the same order and layout as flatten_params."""
    return _flatten_pairs(zip(grads.dW, grads.db), config.field)


def unflatten_params(vector: np.ndarray, config: NetworkConfig) -> Network:
    vector = np.asarray(vector, dtype=np.float64)
    expected = parameter_count(config)
    if vector.ndim != 1 or vector.size != expected:
        raise ContractViolation(
            f"parameter vector for widths {list(config.widths)} ({config.field}) "
            f"must have length {expected}, got {vector.size}"
        )

    per_entry = 2 if config.field == "complex" else 1
    matrices = []
    offset = 0
    for rows, cols in config.layer_shapes:
        for _ in range(2):
            size = rows * cols * per_entry
            chunk = np.array(vector[offset : offset + size])
            offset += size
            if per_entry == 2:
                chunk = chunk.view(np.complex128)
            matrices.append(chunk.reshape(rows, cols))

    return Network.from_matrices(config, matrices[0::2], matrices[1::2])
