import sys
from pathlib import Path

import numpy as np
import pytest
import yaml

# Ensure local package is importable without installation.
PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from enn_argon.core import NetworkConfig  # noqa: E402
from enn_argon.services import random_network  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_real_net(rng):
    config = NetworkConfig.build(n=3, widths=[4, 5, 3, 2])
    return random_network(config, rng)


@pytest.fixture
def small_complex_net(rng):
    config = NetworkConfig.build(n=2, m=2, widths=[3, 4, 2], field="complex")
    return random_network(config, rng)


SMALL_RUN = {
    "network": {"widths": [6, 5, 4]},
    "fire": {"i_max": 20},
    "training": {"log_interval": 5, "window": 0},
    "dataset": {"count": 10},
    "md": {"steps": 20, "samples": 2},
    "checks": {
        "equivariance": {"networks": 4, "unitaries": 2, "max_width": 4, "max_depth": 3},
        "gradient": {"networks": 2, "max_width": 3, "max_depth": 2, "max_dim": 3},
        "parity": {"networks": 3},
        "descriptors": {"trials": 2},
    },
}


def write_config(path, overrides):
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(overrides, f)
    return str(path)


@pytest.fixture
def small_config(tmp_path):
    """Override file shrinking every run to seconds."""
    return write_config(tmp_path / "small.yaml", SMALL_RUN)
