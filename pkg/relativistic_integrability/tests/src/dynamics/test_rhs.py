import numpy as np
import pytest
from src.catalogue import degree_three, henon_heiles, oscillator
from src.dynamics import (HamiltonianSystem, Kinetic, PhaseState,
                          classical_rhs, find_equilibria, relativistic_rhs)
from src.errors import NonFiniteStateError, PotentialError


def test_relativistic_rhs_at_rest():
    state = PhaseState.from_qp(0.0, [1.0, 0.0], [0.0, 0.0])
    actual_return = relativistic_rhs(state, oscillator(1))
    np.testing.assert_allclose(actual_return, [0, 0, -2, 0, 0])


def test_relativistic_velocity_is_below_light_speed():
    state = PhaseState.from_qp(0.0, [0.0, 0.0], [3.0, 4.0])
    actual_return = relativistic_rhs(state, oscillator(1))
    np.testing.assert_allclose(actual_return[:2], [3 / 26**0.5, 4 / 26**0.5])
    assert np.linalg.norm(actual_return[:2]) < 1


def test_u_rate_keeps_the_casimir():
    state = PhaseState.from_qp(0.0, [0.3, -0.2], [0.5, 0.1])
    actual_return = relativistic_rhs(state, henon_heiles(0.5, 0.5))
    p, pdot, udot = state.p, actual_return[2:4], actual_return[4]
    assert 2 * state.u * udot - 2 * p @ pdot == pytest.approx(0, abs=1e-14)


def test_classical_velocity_is_the_momentum():
    state = PhaseState.from_qp(0.0, [1.0, 2.0], [3.0, 4.0])
    actual_return = classical_rhs(state, oscillator(1))
    np.testing.assert_allclose(actual_return[:4], [3, 4, -2, -4])


def test_non_finite_state_raises():
    state = PhaseState(0.0, np.array([np.nan, 0.0]), np.zeros(2), 1.0)
    with pytest.raises(NonFiniteStateError):
        relativistic_rhs(state, oscillator(1))


def test_complex_potential_is_rejected():
    with pytest.raises(PotentialError):
        HamiltonianSystem(degree_three(4), Kinetic.RELATIVISTIC)


def test_energy_at_rest_is_the_rest_mass_plus_potential():
    system = HamiltonianSystem(oscillator(1), Kinetic.RELATIVISTIC)
    actual_return = system.energy([1.0, 1.0], [0.0, 0.0])
    assert actual_return == pytest.approx(3.0)


def test_jacobian_matches_finite_differences():
    system = HamiltonianSystem(henon_heiles(0.5, 0.5), Kinetic.RELATIVISTIC)
    q, p = np.array([0.2, -0.1]), np.array([0.4, 0.3])

    def flow(x):
        y = np.concatenate([x, [np.sqrt(1 + x[2:] @ x[2:])]])
        return system.rhs(0.0, y)[:4]

    x = np.concatenate([q, p])
    step = 1e-6
    numeric = np.array(
        [
            (flow(x + step * e) - flow(x - step * e)) / (2 * step)
            for e in np.eye(4)
        ]
    ).T
    np.testing.assert_allclose(
        system.jacobian(q, p), numeric, rtol=1e-6, atol=1e-8
    )


def test_henon_heiles_equilibria():
    system = HamiltonianSystem(henon_heiles(1.0, -1.0), Kinetic.CLASSICAL)
    candidates = [[0.0, 0.0], [0.1, 0.9], [0.8, -0.4], [-0.8, -0.4]]
    actual_return = find_equilibria(system, candidates)
    assert len(actual_return) == 4
    expected = [[0, 0], [0, 1], [3**0.5 / 2, -0.5], [-(3**0.5) / 2, -0.5]]
    for point in expected:
        assert any(np.allclose(point, found) for found in actual_return)

