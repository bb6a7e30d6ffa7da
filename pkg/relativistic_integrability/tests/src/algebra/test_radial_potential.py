import numpy as np
import pytest
from src.algebra import RadialPotential
from src.errors import PoleError, PotentialError


def test_kepler_value_and_gradient():
    V = RadialPotential(coefficient=-0.25, k=-1)
    q = np.array([3.0, 4.0])
    assert V.value(q) == pytest.approx(-0.05)
    # -0.25 * (-1) * 5^-3 * q
    np.testing.assert_allclose(V.gradient(q), 0.25 / 125 * q)


def test_hessian_matches_finite_differences():
    V = RadialPotential(coefficient=1.5, k=3)
    q = np.array([0.7, -0.4])
    step = 1e-6
    numeric = np.array(
        [
            (V.gradient(q + step * e) - V.gradient(q - step * e)) / (2 * step)
            for e in np.eye(2)
        ]
    )
    np.testing.assert_allclose(V.hessian(q), numeric, rtol=1e-6, atol=1e-8)


def test_origin_is_a_pole_for_negative_degree():
    V = RadialPotential(coefficient=-1.0, k=-1)
    with pytest.raises(PoleError):
        V.value(np.zeros(2))


def test_zero_degree_is_rejected():
    with pytest.raises(PotentialError):
        RadialPotential(coefficient=1.0, k=0)
