import numpy as np
import pytest

from enn_argon.core import ContractViolation, NonFiniteError
from enn_argon.optim import FireConfig, FireState, fire_minimize, fire_update


def quadratic(x):
    return 0.5 * float(x @ x), x.copy()


def rosenbrock(x):
    a, b = x
    loss = (1 - a) ** 2 + 100 * (b - a * a) ** 2
    grad = np.array([-2 * (1 - a) - 400 * a * (b - a * a), 200 * (b - a * a)])
    return float(loss), grad


def square(x):
    return float(x @ x), 2.0 * x


def test_square_converges_to_origin_with_default_hyperparameters():
    result = fire_minimize(square, np.array([1.0]), FireConfig.build(i_max=100_000))
    assert result.reason == "max_iterations"
    assert abs(result.params[0]) < 1e-6
    assert result.losses[-1] < result.losses[0]


def test_rosenbrock_reaches_target_loss_with_default_hyperparameters():
    cfg = FireConfig.build(i_max=1_000_000)
    result = fire_minimize(rosenbrock, np.array([-1.2, 1.0]), cfg, target_loss=1e-6)
    assert result.reason == "target_reached"
    assert result.losses[-1] < 1e-6
    assert np.allclose(result.params, [1.0, 1.0], atol=1e-2)


def test_zero_gradient_leaves_the_parameters_in_place():
    flat = lambda x: (2.0, np.zeros_like(x))  # noqa: E731
    start = np.array([0.5, -1.5, 3.0])
    result = fire_minimize(flat, start, FireConfig(i_max=50))
    assert result.state.iteration == 50
    assert np.array_equal(result.params, start)
    assert result.resets == 50


def test_uphill_step_resets_velocity_dt_and_alpha():
    cfg = FireConfig()
    state = FireState(
        params=np.zeros(2), velocity=np.array([1.0, 0.0]), dt=0.004, alpha=0.05, since_uphill=9
    )
    new, power = fire_update(state, np.array([-1.0, 0.0]), cfg)
    assert power <= 0
    assert np.array_equal(new.velocity, np.zeros(2))
    assert new.dt == pytest.approx(0.002)
    assert new.alpha == cfg.alpha_start
    assert new.since_uphill == 0
    assert new.iteration == 1


def test_downhill_step_accelerates_only_after_n_min():
    cfg = FireConfig(n_min=5)
    force = np.array([1.0, 0.0])
    young = FireState(params=np.zeros(2), velocity=np.zeros(2), dt=0.001, alpha=0.1, since_uphill=2)
    new, power = fire_update(young, force, cfg)
    assert power > 0
    assert new.dt == 0.001 and new.alpha == 0.1

    old = FireState(params=np.zeros(2), velocity=np.zeros(2), dt=0.001, alpha=0.1, since_uphill=5)
    new, _ = fire_update(old, force, cfg)
    assert new.dt == pytest.approx(0.0011)
    assert new.alpha == pytest.approx(0.099)


def test_dt_is_capped_at_dt_max():
    cfg = FireConfig(dt_init=0.001, dt_max=0.0105)
    state = FireState(params=np.zeros(1), velocity=np.zeros(1), dt=0.01, alpha=0.1, since_uphill=10)
    new, _ = fire_update(state, np.ones(1), cfg)
    assert new.dt == 0.0105


def test_euler_step_moves_params_before_updating_velocity():
    cfg = FireConfig(pseudo_mass=0.5)
    state = FireState(params=np.array([1.0]), velocity=np.array([2.0]), dt=0.1, alpha=0.0)
    new, _ = fire_update(state, np.array([3.0]), cfg)
    assert new.params[0] == pytest.approx(1.2)
    assert new.velocity[0] == pytest.approx(2.0 + 3.0 / 0.5 * 0.1)


def test_zero_iterations_returns_the_start():
    result = fire_minimize(quadratic, np.array([1.0, 1.0]), FireConfig(i_max=0))
    assert result.state.iteration == 0
    assert result.losses == [1.0]
    assert np.array_equal(result.params, [1.0, 1.0])


def test_window_convergence_stops_early():
    flat = lambda x: (1.0, np.zeros_like(x))  # noqa: E731
    result = fire_minimize(flat, np.zeros(3), FireConfig(i_max=1000), window=10, tolerance=1e-12)
    assert result.reason == "converged"
    assert result.state.iteration == 10
    assert np.array_equal(result.params, np.zeros(3))


def test_callback_sees_every_evaluated_point():
    seen = []
    fire_minimize(
        quadratic,
        np.ones(2),
        FireConfig(i_max=7),
        callback=lambda state, loss: seen.append(state.iteration),
    )
    assert seen == list(range(8))


def test_non_finite_gradient_raises_with_iteration():
    calls = {"count": 0}

    def exploding(x):
        calls["count"] += 1
        if calls["count"] > 3:
            return float("nan"), x
        return quadratic(x)

    with pytest.raises(NonFiniteError) as excinfo:
        fire_minimize(exploding, np.ones(2), FireConfig(i_max=10))
    assert excinfo.value.iteration == 3


@pytest.mark.parametrize(
    "kwargs",
    [{"f_dec": 1.5}, {"f_inc": 0.9}, {"dt_init": 0.1, "dt_max": 0.01}, {"pseudo_mass": 0.0}],
)
def test_invalid_fire_config_is_rejected(kwargs):
    with pytest.raises(ContractViolation):
        FireConfig.build(**kwargs)
