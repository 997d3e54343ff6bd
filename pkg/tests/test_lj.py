import numpy as np
import pytest

from enn_argon.core import ContractViolation, random_rotation
from enn_argon.physics import (
    ACCEL,
    K_B,
    LJParams,
    generate_dataset,
    lj_forces,
    lj_pair_energy,
    lj_total_energy,
)


@pytest.fixture
def argon():
    return LJParams.argon()


def test_unit_constants():
    assert ACCEL == pytest.approx(9.648533e-3, rel=1e-6)
    assert K_B == 8.617333262e-5


def test_argon_parameters(argon):
    assert argon.epsilon == pytest.approx(120.0 * 8.617333262e-5)
    assert argon.r0 == 3.4


def test_pair_energy_zero_at_r0_and_minimum_at_r_min(argon):
    assert lj_pair_energy(argon.r0, argon) == pytest.approx(0.0, abs=1e-18)
    assert lj_pair_energy(argon.r_min_energy, argon) == pytest.approx(-argon.epsilon, rel=1e-12)


def test_pair_force_vanishes_at_the_minimum(argon):
    positions = np.array([[0.0, 0.0, 0.0], [argon.r_min_energy, 0.0, 0.0]])
    assert np.max(np.abs(lj_forces(positions, argon))) < 1e-12


def test_close_pair_repels(argon):
    positions = np.array([[0.0, 0.0, 0.0], [3.0, 0.0, 0.0]])
    forces = lj_forces(positions, argon)
    assert forces[0, 0] < 0 < forces[1, 0]


def test_forces_are_minus_energy_gradient(argon):
    positions = generate_dataset(1, seed=11).positions[0]
    forces = lj_forces(positions, argon)
    h = 1e-6
    numeric = np.zeros_like(positions)
    for index in np.ndindex(*positions.shape):
        up, down = positions.copy(), positions.copy()
        up[index] += h
        down[index] -= h
        numeric[index] = -(lj_total_energy(up, argon) - lj_total_energy(down, argon)) / (2 * h)
    assert np.linalg.norm(forces - numeric) / np.linalg.norm(forces) < 1e-8


def test_forces_sum_to_zero(argon):
    for positions in generate_dataset(20, seed=12).positions:
        assert np.max(np.abs(lj_forces(positions, argon).sum(axis=0))) < 1e-12


def test_coincident_atoms_are_rejected(argon):
    with pytest.raises(ContractViolation):
        lj_forces(np.zeros((2, 3)), argon)


def test_invalid_parameters_are_rejected():
    with pytest.raises(ContractViolation):
        LJParams.build(epsilon=-1.0, r0=3.4)


def test_forces_rotate_with_the_configuration(argon, rng):
    positions = 3.0 * rng.standard_normal((4, 3))
    R = random_rotation(rng)
    forces = lj_forces(positions, argon)
    turned = lj_forces(positions @ R.T, argon)
    scale = max(1.0, float(np.max(np.abs(forces))))
    assert np.max(np.abs(turned - forces @ R.T)) < 1e-12 * scale
