"""
Mean-squared-error loss and backpropagation through the equivariant layers.

Gradients of the real loss with respect to a complex parameter z are
reported as dL/dRe(z) + i dL/dIm(z); real and imaginary parts are treated as
independent real parameters. For a real network this is the ordinary gradient.
"""

import numpy as np

from .errors import ContractViolation
from .layers import EPS_NORM, column_norms, network_forward
from .models import Gradients, LayerParams, Network, VectorBatch


def loss_normalizer(shape: tuple[int, ...], mask: np.ndarray | None = None) -> int:
    """Number of scalar components entering the mean: samples x selected components."""
    if mask is None:
        return int(np.prod(shape))
    mask = np.asarray(mask, dtype=bool)
    return int(np.sum(np.broadcast_to(mask, shape)))


def _check_pair(output: np.ndarray, target: np.ndarray) -> None:
    if output.shape != target.shape:
        raise ContractViolation(
            f"output and target shapes differ: {output.shape} vs {target.shape}"
        )


def loss_mse(
    output: VectorBatch, target: VectorBatch, mask: np.ndarray | None = None
) -> float:
    """
    Mean over samples and scalar components of |output - target|^2.

    ``mask`` (broadcastable to the batch shape) drops components, e.g. dummy
    feature slots of an augmented output, from both the sum and the count.
    """
    output = np.asarray(output)
    target = np.asarray(target)
    _check_pair(output, target)
    count = loss_normalizer(output.shape, mask)
    if count == 0:
        raise ContractViolation("loss over zero components")
    diff = output - target
    if mask is not None:
        diff = diff * np.asarray(mask, dtype=bool)
    return float(np.sum(np.abs(diff) ** 2) / count)


def _contract(a: np.ndarray, g: np.ndarray) -> np.ndarray:
    """sum over samples and vector coordinates of conj(a)^T g, one GEMM."""
    a2 = a.reshape(-1, a.shape[-1])
    g2 = g.reshape(-1, g.shape[-1])
    return a2.conj().T @ g2


def activation_backward(y: np.ndarray, grad_out: np.ndarray, kind: str, a: float) -> np.ndarray:
    """Pull a gradient back through the column-wise activation at pre-activation y."""
    if kind == "identity":
        return grad_out
    if kind != "softsign_residue":
        raise ContractViolation(f"unknown activation {kind!r}")

    rho = column_norms(y)[..., np.newaxis, :]
    scale = 1.0 / (1.0 + rho) + a
    # d||u|| / du is undefined at u = 0; the radial term vanishes there.
    radial = np.sum(np.real(np.conj(grad_out) * y), axis=-2, keepdims=True)
    safe = np.where(rho < EPS_NORM, 1.0, rho)
    coef = np.where(rho < EPS_NORM, 0.0, -radial / ((1.0 + rho) ** 2 * safe))
    return scale * grad_out + coef * y


def normalize_backward(x: np.ndarray, e: np.ndarray, grad_e: np.ndarray, n: int) -> np.ndarray:
    """
    Pull a gradient back through e = x / ||x|| on the vector part.

    Per column the Jacobian is (I - e e^H) / ||x||; zero-norm columns and
    feature slots (constant 1) receive no gradient.
    """
    rho = column_norms(x, n)[..., np.newaxis, :]
    ev = e[..., :n, :]
    gv = grad_e[..., :n, :]
    along = np.sum(np.real(np.conj(ev) * gv), axis=-2, keepdims=True)
    safe = np.where(rho < EPS_NORM, 1.0, rho)
    grad_v = np.where(rho < EPS_NORM, 0.0, (gv - along * ev) / safe)
    if n == x.shape[-2]:
        return grad_v
    tail = np.zeros(x.shape[:-2] + (x.shape[-2] - n, x.shape[-1]), dtype=grad_v.dtype)
    return np.concatenate([grad_v, tail], axis=-2)


def backward(
    net: Network,
    x0: VectorBatch,
    target: VectorBatch,
    mask: np.ndarray | None = None,
) -> tuple[float, Gradients]:
    """
    Loss and analytic gradients dL/dW_k, dL/db_k for every layer.

    The error signal delta is carried from the output layer back to the
    input: through the activation Jacobian, then through y = x W + e b into
    both the linear and the normalized-column paths.
    """
    output, cache = network_forward(x0, net)
    target = np.asarray(target)
    _check_pair(output, target)

    count = loss_normalizer(output.shape, mask)
    if count == 0:
        raise ContractViolation("loss over zero components")
    diff = output - target
    if mask is not None:
        diff = diff * np.asarray(mask, dtype=bool)
    loss = float(np.sum(np.abs(diff) ** 2) / count)

    n = net.config.n
    delta = 2.0 * diff / count
    dW: list[np.ndarray] = [np.empty(0)] * net.config.depth
    db: list[np.ndarray] = [np.empty(0)] * net.config.depth

    for k in reversed(range(net.config.depth)):
        layer: LayerParams = net.layers[k]
        x, y, e = cache.xs[k], cache.ys[k], cache.es[k]
        delta = activation_backward(y, delta, layer.activation, layer.residue_a)
        dW[k] = _cast(_contract(x, delta), layer.W)
        db[k] = _cast(_contract(e, delta), layer.b)
        if k > 0:
            through_e = delta @ layer.b.conj().T
            delta = delta @ layer.W.conj().T + normalize_backward(x, e, through_e, n)

    return loss, Gradients(dW=tuple(dW), db=tuple(db))


def _cast(grad: np.ndarray, like: np.ndarray) -> np.ndarray:
    # Real parameters get the real part; complex inputs into a real network
    # are outside the real-parameter model.
    if np.iscomplexobj(like):
        return grad.astype(like.dtype, copy=False)
    return np.real(grad).astype(like.dtype, copy=False)


def finite_difference_gradients(
    net: Network,
    x0: VectorBatch,
    target: VectorBatch,
    step: float = 1e-6,
    mask: np.ndarray | None = None,
) -> Gradients:
    """
    Central-difference estimate (L(z + h) - L(z - h)) / 2h of every gradient entry.

    Complex entries are perturbed separately along their real and imaginary
    parts and recombined as dRe + i dIm.
    """
    if step <= 0:
        raise ContractViolation(f"finite-difference step must be > 0, got {step}")

    # from_matrices copies, so the perturbed arrays never alias the caller's network
    perturbed = Network.from_matrices(
        net.config, [layer.W for layer in net.layers], [layer.b for layer in net.layers]
    )
    arrays = [(perturbed.layers[k].W, perturbed.layers[k].b) for k in range(net.config.depth)]

    def loss() -> float:
        output, _ = network_forward(x0, perturbed)
        return loss_mse(output, target, mask)

    def central(matrix: np.ndarray, index: tuple[int, int], direction: complex) -> float:
        original = matrix[index]
        matrix[index] = original + step * direction
        upper = loss()
        matrix[index] = original - step * direction
        lower = loss()
        matrix[index] = original
        return (upper - lower) / (2.0 * step)

    is_complex = net.config.field == "complex"
    grads: list[tuple[np.ndarray, np.ndarray]] = []
    for W, b in arrays:
        pair = []
        for matrix in (W, b):
            g = np.zeros_like(matrix)
            for index in np.ndindex(*matrix.shape):
                value = central(matrix, index, 1.0)
                if is_complex:
                    value = value + 1j * central(matrix, index, 1j)
                g[index] = value
            pair.append(g)
        grads.append((pair[0], pair[1]))

    return Gradients(dW=tuple(g[0] for g in grads), db=tuple(g[1] for g in grads))
