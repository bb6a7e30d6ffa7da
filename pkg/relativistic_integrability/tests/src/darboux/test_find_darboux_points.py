import numpy as np
import pytest
from src.algebra import HomogeneousPotential
from src.catalogue import cartesian, degree_three, oscillator
from src.darboux import (Normalization, darboux_polynomial,
                         find_darboux_points)
from src.errors import DarbouxError


def test_darboux_polynomial_of_cartesian_quartic():
    actual_return = darboux_polynomial(cartesian(4))
    # W(t) = 4t^3 - 4t
    np.testing.assert_allclose(actual_return, [4, 0, -4, 0])


def test_cartesian_quartic_has_four_points():
    actual_return = find_darboux_points(cartesian(4))
    assert len(actual_return) == 4
    for point in actual_return:
        assert point.gamma == pytest.approx(1)
        assert point.normalization == Normalization.GAMMA_ONE
        assert point.residual <= 1e-10


def test_vertical_direction_is_listed_last():
    actual_return = find_darboux_points(cartesian(3))
    np.testing.assert_allclose(actual_return[-1].d[0], 0, atol=1e-14)


def test_gamma_zero_directions_are_excluded():
    # W has the double root t = i with dV/dq1(1, i) = 0
    actual_return = find_darboux_points(degree_three(6))
    assert len(actual_return) == 1
    np.testing.assert_allclose(actual_return[0].d, [0, 1], atol=1e-12)


def test_isotropic_oscillator_is_a_continuum():
    actual_return = find_darboux_points(oscillator(1))
    assert len(actual_return) == 1
    assert actual_return[0].continuum
    assert actual_return[0].normalization == Normalization.GAMMA_RAW
    assert actual_return[0].gamma == pytest.approx(2)


def test_three_variables_raise_darboux_error():
    V = HomogeneousPotential.from_terms(3, {(1, 1, 1): 1})
    with pytest.raises(DarbouxError):
        find_darboux_points(V)
