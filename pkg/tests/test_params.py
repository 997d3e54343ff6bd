import numpy as np
import pytest

from enn_argon.core import ContractViolation, Network, NetworkConfig
from enn_argon.optim import flatten_params, parameter_count, unflatten_params


def test_flatten_order_is_layer_major_w_before_b_row_major():
    config = NetworkConfig.build(n=1, widths=[2, 2, 1])
    W0 = np.array([[1.0, 2.0], [3.0, 4.0]])
    b0 = np.array([[5.0, 6.0], [7.0, 8.0]])
    W1 = np.array([[9.0], [10.0]])
    b1 = np.array([[11.0], [12.0]])
    net = Network.from_matrices(config, [W0, W1], [b0, b1])
    assert flatten_params(net).tolist() == [float(v) for v in range(1, 13)]


def test_complex_entries_interleave_real_and_imaginary():
    config = NetworkConfig.build(n=1, widths=[1, 1], field="complex")
    net = Network.from_matrices(config, [np.array([[1 + 2j]])], [np.array([[3 - 4j]])])
    assert flatten_params(net).tolist() == [1.0, 2.0, 3.0, -4.0]


def test_parameter_count_matches_flattened_length(small_real_net, small_complex_net):
    for net in (small_real_net, small_complex_net):
        assert flatten_params(net).size == parameter_count(net.config)


def test_default_architecture_parameter_count():
    config = NetworkConfig.build(n=3, widths=[6, 50, 90, 100, 80, 50, 4])
    weights = 6 * 50 + 50 * 90 + 90 * 100 + 100 * 80 + 80 * 50 + 50 * 4
    assert parameter_count(config) == 2 * weights


def test_unflatten_restores_every_bit(small_real_net, small_complex_net):
    for net in (small_real_net, small_complex_net):
        restored = unflatten_params(flatten_params(net), net.config)
        for a, b in zip(net.layers, restored.layers):
            assert np.array_equal(a.W, b.W) and np.array_equal(a.b, b.b)
            assert a.activation == b.activation


def test_unflatten_rejects_wrong_length(small_real_net):
    vector = flatten_params(small_real_net)
    with pytest.raises(ContractViolation):
        unflatten_params(vector[:-1], small_real_net.config)
