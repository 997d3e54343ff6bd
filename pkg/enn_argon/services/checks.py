"""Property suites: equivariance, gradients, parity and descriptor symmetry."""

import logging
from pathlib import Path
from typing import Any, Callable

import numpy as np

from ..config import load_defaults
from ..core.errors import ContractViolation, PropertySuiteFailure
from ..core.grad import backward, finite_difference_gradients
from ..core.group import act, random_rotation, random_unitary
from ..core.layers import network_forward
from ..core.models import Network, NetworkConfig
from ..descriptors.symmetry import (
    DescriptorHyper,
    gaussian_edge_features,
    gnn_scalar_layer,
    gnn_vector_layer,
    kronecker_weights,
    scalar_symmetry,
    vector_symmetry,
)
from ..optim.params import flatten_gradients
from ..storage import load_checkpoint
from ..utils.seeding import SeedStreams

logger = logging.getLogger(__name__)

MODES = ("equivariance", "gradient", "parity", "descriptors")
_ACTIVATIONS = ("softsign_residue", "identity")
_FIELDS = ("real", "complex")


def _draw(rng: np.random.Generator, shape, field: str) -> np.ndarray:
    values = rng.standard_normal(shape)
    if field == "complex":
        values = values + 1j * rng.standard_normal(shape)
    return values


def random_network(config: NetworkConfig, rng: np.random.Generator, scale: float = 1.0) -> Network:
    """Gaussian weights and biases, so the bias path is exercised too."""
    weights = [scale * _draw(rng, shape, config.field) for shape in config.layer_shapes]
    biases = [scale * _draw(rng, shape, config.field) for shape in config.layer_shapes]
    return Network.from_matrices(config, weights, biases)


def random_config(
    rng: np.random.Generator,
    n: int,
    m: int,
    max_width: int,
    max_depth: int,
    field: str,
) -> NetworkConfig:
    depth = int(rng.integers(1, max_depth + 1))
    widths = [int(w) for w in rng.integers(1, max_width + 1, size=depth + 1)]
    activations = [str(a) for a in rng.choice(_ACTIVATIONS, size=depth)]
    return NetworkConfig.build(
        n=n,
        m=m,
        widths=widths,
        activations=activations,
        residue_a=float(rng.uniform(0.0, 0.1)),
        field=field,
    )


def _relative(deviation: np.ndarray, reference: np.ndarray) -> float:
    scale = float(np.linalg.norm(reference))
    return float(np.linalg.norm(deviation)) / (scale if scale > 0 else 1.0)


def _verdict(mode: str, report: dict[str, Any]) -> dict[str, Any]:
    report["passed"] = bool(report["max_deviation"] < report["threshold"])
    logger.info(
        "%s suite: max deviation %.3e against threshold %.1e over %d cases (%s)",
        mode,
        report["max_deviation"],
        report["threshold"],
        report["cases"],
        "pass" if report["passed"] else "FAIL",
    )
    if not report["passed"]:
        raise PropertySuiteFailure(
            f"{mode} suite failed: max deviation {report['max_deviation']:.3e} "
            f">= threshold {report['threshold']:.1e}",
            report,
        )
    return report


class CheckService:
    """Run a property suite on random networks or a trained checkpoint."""

    def __init__(self, config_path: str | Path | None = None) -> None:
        self.defaults = load_defaults(config_path)

    def run(
        self,
        mode: str,
        seed: int | None = None,
        checkpoint: str | Path | None = None,
        **overrides: Any,
    ) -> dict[str, Any]:
        """
        Run one suite and return its report.

        Raises PropertySuiteFailure (carrying the report) when the maximum
        deviation reaches the suite threshold.
        """
        suites: dict[str, Callable[..., dict[str, Any]]] = {
            "equivariance": self.equivariance,
            "gradient": self.gradient,
            "parity": self.parity,
            "descriptors": self.descriptors,
        }
        if mode not in suites:
            raise ContractViolation(f"unknown check mode {mode!r}; expected one of {MODES}")
        settings = dict(self.defaults["checks"][mode])
        settings.update({k: v for k, v in overrides.items() if v is not None})
        seed = int(self.defaults.get("seed", 0) if seed is None else seed)
        rng = SeedStreams(seed).rng("checks")
        network = load_checkpoint(checkpoint).network if checkpoint is not None else None
        if network is not None and mode == "descriptors":
            raise ContractViolation("the descriptors suite does not take a checkpoint")
        report = suites[mode](rng, network=network, **settings)
        report.update({"mode": mode, "seed": seed})
        if checkpoint is not None:
            report["checkpoint"] = str(checkpoint)
        return _verdict(mode, report)

    def equivariance(
        self,
        rng: np.random.Generator,
        network: Network | None = None,
        networks: int = 100,
        unitaries: int = 10,
        max_width: int = 8,
        max_depth: int = 5,
        dims=(2, 3, 4),
        features=(0, 2),
        threshold: float = 1e-10,
    ) -> dict[str, Any]:
        """max ||f(Ux) - U f(x)|| / ||f(x)|| over random networks and unitaries, U = -I included."""
        worst = 0.0
        cases = 0
        for k in range(networks):
            if network is None:
                field = _FIELDS[k % 2]
                n, m = int(rng.choice(dims)), int(rng.choice(features))
                net = random_network(random_config(rng, n, m, max_width, max_depth, field), rng)
            else:
                net = network
            cfg = net.config
            x = _draw(rng, (cfg.dim, cfg.widths[0]), cfg.field)
            fx, _ = network_forward(x, net)
            group = [random_unitary(cfg.n, rng, cfg.field) for _ in range(unitaries)]
            group.append(-np.eye(cfg.n))
            for U in group:
                fux, _ = network_forward(act(U, x, cfg.n), net)
                worst = max(worst, _relative(fux - act(U, fx, cfg.n), fx))
                cases += 1
        return {"max_deviation": worst, "threshold": float(threshold), "cases": cases}

    def gradient(
        self,
        rng: np.random.Generator,
        network: Network | None = None,
        networks: int = 20,
        max_width: int = 6,
        max_depth: int = 4,
        max_dim: int = 4,
        step: float = 1e-6,
        threshold: float = 1e-6,
        samples: int = 2,
    ) -> dict[str, Any]:
        """Norm-wise relative error of backward against central finite differences."""
        worst = 0.0
        for k in range(networks):
            if network is None:
                field = _FIELDS[k % 2]
                n = int(rng.integers(1, max_dim + 1))
                m = int(rng.integers(0, 2))
                net = random_network(random_config(rng, n, m, max_width, max_depth, field), rng, 0.5)
            else:
                net = network
            cfg = net.config
            x0 = _draw(rng, (samples, cfg.dim, cfg.widths[0]), cfg.field)
            target = _draw(rng, (samples, cfg.dim, cfg.widths[-1]), cfg.field)
            _, analytic = backward(net, x0, target)
            numeric = finite_difference_gradients(net, x0, target, step=step)
            g_a = flatten_gradients(analytic, cfg)
            g_n = flatten_gradients(numeric, cfg)
            scale = max(float(np.linalg.norm(g_a)), float(np.linalg.norm(g_n)))
            error = float(np.linalg.norm(g_a - g_n)) / scale if scale > 0 else 0.0
            worst = max(worst, error)
        return {"max_deviation": worst, "threshold": float(threshold), "cases": networks, "step": step}

    def parity(
        self,
        rng: np.random.Generator,
        network: Network | None = None,
        networks: int = 20,
        max_width: int = 8,
        max_depth: int = 5,
        threshold: float = 1e-12,
    ) -> dict[str, Any]:
        """max ||f(-x) + f(x)|| / ||f(x)|| for real networks without feature rows."""
        worst = 0.0
        for _ in range(networks):
            if network is None:
                n = int(rng.integers(1, 5))
                net = random_network(random_config(rng, n, 0, max_width, max_depth, "real"), rng)
            else:
                net = network
            cfg = net.config
            if cfg.m != 0:
                raise ContractViolation("parity is checked on networks without feature rows")
            x = _draw(rng, (cfg.dim, cfg.widths[0]), cfg.field)
            fx, _ = network_forward(x, net)
            f_neg, _ = network_forward(-x, net)
            worst = max(worst, _relative(f_neg + fx, fx))
        return {"max_deviation": worst, "threshold": float(threshold), "cases": networks}

    def descriptors(
        self,
        rng: np.random.Generator,
        network: Network | None = None,
        trials: int = 20,
        atoms: int = 6,
        threshold: float = 1e-12,
    ) -> dict[str, Any]:
        """
        Permutation (bitwise), rotation (absolute) and GNN-reduction (bitwise) checks.

        Bitwise failures count as an infinite deviation.
        """
        section = self.defaults["descriptors"]
        hyper = DescriptorHyper.grid(section["eta"], section["r_s"], section["r_c"])
        rotation_dev = 0.0
        permutation_exact = True
        reduction_exact = True
        ones = np.ones((atoms, 1))
        weights = kronecker_weights(hyper.size)
        for _ in range(trials):
            positions = rng.uniform(-2.5, 2.5, size=(atoms, 3))
            perm = rng.permutation(atoms)
            where = np.argsort(perm)
            R = random_rotation(rng)
            rotated = positions @ R.T
            edges = gaussian_edge_features(positions, hyper)
            gnn_vectors = gnn_vector_layer(positions, edges, ones, weights)
            gnn_scalars = gnn_scalar_layer(edges, ones, weights)
            for i in range(atoms):
                scalars = scalar_symmetry(i, positions, hyper)
                vectors = vector_symmetry(i, positions, hyper)
                permutation_exact &= np.array_equal(
                    scalar_symmetry(int(where[i]), positions[perm], hyper), scalars
                ) and np.array_equal(vector_symmetry(int(where[i]), positions[perm], hyper), vectors)
                reduction_exact &= np.array_equal(gnn_vectors[i], vectors) and np.array_equal(
                    gnn_scalars[i], scalars
                )
                rotation_dev = max(
                    rotation_dev,
                    float(np.max(np.abs(scalar_symmetry(i, rotated, hyper) - scalars))),
                    float(np.max(np.abs(vector_symmetry(i, rotated, hyper) - R @ vectors))),
                )
        exact = permutation_exact and reduction_exact
        return {
            "max_deviation": rotation_dev if exact else float("inf"),
            "threshold": float(threshold),
            "cases": trials * atoms,
            "rotation_deviation": rotation_dev,
            "permutation_bit_identical": bool(permutation_exact),
            "gnn_reduction_bit_identical": bool(reduction_exact),
        }
