import math

import numpy as np
import pytest
from src.algebra import Polynomial
from src.catalogue import kepler, oscillator
from src.dynamics import (Kinetic, PhaseState, conservation_audit,
                          integrate)
from src.errors import DivergenceError, MaxStepsExceededError
from src.settings import IntegratorSettings


def test_classical_oscillator_returns_after_one_period():
    V = oscillator(1, scale=0.5)
    state0 = PhaseState.from_qp(0.0, [1.0, 0.0], [0.0, 0.5])
    trajectory = integrate(
        V, Kinetic.CLASSICAL, state0, 2 * math.pi, t_eval=[0, 2 * math.pi]
    )
    actual_return = trajectory.states[-1]
    np.testing.assert_allclose(actual_return.q, [1.0, 0.0], atol=1e-8)
    np.testing.assert_allclose(actual_return.p, [0.0, 0.5], atol=1e-8)


def test_free_relativistic_particle_moves_uniformly():
    free = Polynomial(n=2, monomials=())
    state0 = PhaseState.from_qp(0.0, [0.0, 0.0], [3.0, 4.0])
    trajectory = integrate(
        free, Kinetic.RELATIVISTIC, state0, 10.0, t_eval=[0.0, 10.0]
    )
    actual_return = trajectory.states[-1].q
    np.testing.assert_allclose(actual_return, np.array([3, 4]) * 10 / 26**0.5)


def test_t_eval_samples_are_returned_in_order():
    state0 = PhaseState.from_qp(0.0, [1.0, 0.0], [0.0, 0.0])
    times = np.linspace(0, 5, 11)
    trajectory = integrate(
        oscillator(1), Kinetic.RELATIVISTIC, state0, 5.0, t_eval=times
    )
    np.testing.assert_allclose(trajectory.times, times)


def test_backward_integration():
    V = oscillator(1, scale=0.5)
    state0 = PhaseState.from_qp(0.0, [1.0, 0.0], [0.0, 0.0])
    trajectory = integrate(
        V, Kinetic.CLASSICAL, state0, -math.pi, t_eval=[0.0, -math.pi]
    )
    np.testing.assert_allclose(trajectory.states[-1].q, [-1, 0], atol=1e-8)


def test_kepler_conserves_energy_casimir_and_angular_momentum():
    V = kepler(-0.25)
    state0 = PhaseState.from_qp(0.0, [0.0, 1.0], [math.sqrt(0.3225), 0.0])
    trajectory = integrate(V, Kinetic.RELATIVISTIC, state0, 50.0)
    actual_return = conservation_audit(V, Kinetic.RELATIVISTIC, trajectory)
    assert actual_return.energy_drift <= 1e-8
    assert actual_return.casimir_drift <= 1e-9
    assert actual_return.angular_momentum_drift <= 1e-8


def test_free_particle_conserves_every_momentum():
    free = Polynomial(n=2, monomials=())
    state0 = PhaseState.from_qp(0.0, [0.0, 0.0], [0.5, -0.2])
    trajectory = integrate(free, Kinetic.RELATIVISTIC, state0, 3.0)
    actual_return = conservation_audit(free, Kinetic.RELATIVISTIC, trajectory)
    assert max(actual_return.momentum_drift) == 0.0


def test_step_budget_is_enforced():
    state0 = PhaseState.from_qp(0.0, [1.0, 0.0], [0.0, 0.0])
    settings = IntegratorSettings(max_steps=3)
    with pytest.raises(MaxStepsExceededError):
        integrate(oscillator(1), Kinetic.CLASSICAL, state0, 100.0, settings)


def test_escaping_orbit_diverges():
    state0 = PhaseState.from_qp(0.0, [0.0, 0.1], [0.0, 0.0])
    settings = IntegratorSettings(divergence_radius=10.0)
    with pytest.raises(DivergenceError):
        integrate(oscillator(-1), Kinetic.CLASSICAL, state0, 100.0, settings)


def test_zero_length_interval_raises_value_error():
    state0 = PhaseState.from_qp(1.0, [1.0, 0.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        integrate(oscillator(1), Kinetic.CLASSICAL, state0, 1.0)
