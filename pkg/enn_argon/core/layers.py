"""
Forward algebra of the equivariant network.

Every function works on arrays of shape (..., n + m, M): the last two axes
are one vector batch (M column vectors), any leading axes index samples. The
first n coordinates of a column carry the vector part that the group acts on;
the trailing m coordinates carry scalar features that stay fixed.
"""

import numpy as np

from .errors import ContractViolation
from .models import ForwardCache, LayerParams, Network, VectorBatch

# Columns whose vector part is shorter than this normalize to zero.
EPS_NORM = 1e-12


def column_norms(x: VectorBatch, n: int | None = None) -> np.ndarray:
    """Euclidean (complex-modulus) norm of the first n coordinates of each column."""
    part = x if n is None else x[..., :n, :]
    return np.sqrt(np.sum(np.abs(part) ** 2, axis=-2))


def normalize_columns(x: VectorBatch, n: int | None = None) -> VectorBatch:
    """
    Return e with e^(a) = x^(a) / ||x^(a)|| on the vector part and 1 on features.

    ``n`` is the vector dimension; it defaults to the full column length (no
    features). Columns with ||x^(a)|| < EPS_NORM map to the zero vector on the
    vector part.
    """
    x = np.asarray(x)
    dim = x.shape[-2]
    n = dim if n is None else n
    if not 0 < n <= dim:
        raise ContractViolation(f"vector dimension {n} out of range for columns of length {dim}")

    norms = column_norms(x, n)[..., np.newaxis, :]
    small = norms < EPS_NORM
    safe = np.where(small, 1.0, norms)
    vector = np.where(small, 0.0, x[..., :n, :] / safe)

    if n == dim:
        return vector
    ones = np.ones(x.shape[:-2] + (dim - n, x.shape[-1]), dtype=vector.dtype)
    return np.concatenate([vector, ones], axis=-2)


def apply_activation(y: VectorBatch, kind: str, a: float = 0.0) -> VectorBatch:
    """
    Apply a column-wise equivariant activation.

    softsign_residue: u / (1 + ||u||) + a u
    identity:         u
    """
    if kind == "identity":
        return y
    if kind == "softsign_residue":
        rho = column_norms(y)[..., np.newaxis, :]
        return y / (1.0 + rho) + y * a
    raise ContractViolation(
        f"unknown activation {kind!r}; expected 'softsign_residue' or 'identity'"
    )


def layer_forward(x: VectorBatch, p: LayerParams, n: int | None = None) -> VectorBatch:
    """sigma(x W + normalize_columns(x) b) for one layer."""
    return _layer_forward(x, p, n)[0]


def _layer_forward(
    x: VectorBatch, p: LayerParams, n: int | None
) -> tuple[VectorBatch, VectorBatch, VectorBatch]:
    x = np.asarray(x)
    if x.ndim < 2 or x.shape[-1] != p.W.shape[0]:
        raise ContractViolation(
            f"layer input has {x.shape[-1] if x.ndim else 0} columns, "
            f"weights expect {p.W.shape[0]} (W is {p.W.shape[0]}x{p.W.shape[1]})"
        )
    e = normalize_columns(x, n)
    y = x @ p.W + e @ p.b
    return apply_activation(y, p.activation, p.residue_a), y, e


def network_forward(x0: VectorBatch, net: Network) -> tuple[VectorBatch, ForwardCache]:
    """
    Run every layer in sequence.

    Returns the output batch and a cache holding each layer input x_k, its
    normalized columns e_k and the pre-activation y_k.
    """
    cfg = net.config
    x0 = np.asarray(x0)
    if x0.ndim < 2 or x0.shape[-2:] != (cfg.dim, cfg.widths[0]):
        raise ContractViolation(
            f"network input: expected trailing shape ({cfg.dim}, {cfg.widths[0]}), "
            f"got {x0.shape[-2:] if x0.ndim >= 2 else x0.shape}"
        )

    cache = ForwardCache()
    x = x0
    for layer in net.layers:
        cache.xs.append(x)
        x, y, e = _layer_forward(x, layer, cfg.n)
        cache.ys.append(y)
        cache.es.append(e)
    cache.xs.append(x)
    return x, cache


def augment_features(x0: VectorBatch, h: np.ndarray | None) -> VectorBatch:
    """
    Append m scalar features to every column: (x^(a), h^(a)) in C^(n+m).

    ``h`` has shape (..., m, M) matching the columns of ``x0``; ``None`` or
    m = 0 returns ``x0`` unchanged.
    """
    x0 = np.asarray(x0)
    if h is None:
        return x0
    h = np.asarray(h)
    if h.ndim != x0.ndim or h.shape[:-2] != x0.shape[:-2] or h.shape[-1] != x0.shape[-1]:
        raise ContractViolation(
            f"features must have shape (..., m, {x0.shape[-1]}) matching input "
            f"{x0.shape}, got {h.shape}"
        )
    if h.shape[-2] == 0:
        return x0
    return np.concatenate([x0, h.astype(np.result_type(x0, h), copy=False)], axis=-2)
