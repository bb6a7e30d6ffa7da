from fractions import Fraction

import pytest
import sympy
from src.errors import PoleError
from src.galois_conditions import riemann_exponents
from src.variational import (merged_exponent_differences,
                             singular_exponent_differences,
                             symbolic_coefficient_r,
                             variational_coefficient_p,
                             variational_coefficient_q,
                             variational_coefficient_r)


def test_coefficients_at_a_regular_point():
    assert variational_coefficient_p(3, 0.5, 2.0) == pytest.approx(
        1 / 3 + 1.2
    )
    assert variational_coefficient_q(3, 2, 0.5, 2.0) == pytest.approx(-0.4)


@pytest.mark.parametrize("z", [0.0, -0.5, 1.5])
def test_singular_points_raise_pole_error(z):
    with pytest.raises(PoleError):
        variational_coefficient_r(3, 2, 0.5, z)


def test_numeric_r_matches_symbolic_r():
    z = sympy.Symbol("z")
    exact = symbolic_coefficient_r(4, Fraction(7, 2), Fraction(1, 3), z)
    actual_return = variational_coefficient_r(4, 3.5, 1 / 3, 2.25)
    assert actual_return == pytest.approx(float(exact.subs(z, 2.25)))


def test_generic_leading_coefficients():
    actual_return = singular_exponent_differences(3, 5, Fraction(1, 2))
    points = [item.point for item in actual_return]
    assert points == [Fraction(-1, 2), Fraction(0), Fraction(3, 2), None]
    by_point = {item.point: item for item in actual_return}
    assert by_point[Fraction(0)].leading == Fraction(1 - 9, 36)
    assert by_point[Fraction(0)].difference == pytest.approx(1 / 3)
    assert by_point[Fraction(-1, 2)].leading == Fraction(-3, 16)
    assert by_point[Fraction(3, 2)].difference == pytest.approx(0.5)


@pytest.mark.parametrize("k", [3, 4, 5, 6, -3])
@pytest.mark.parametrize(
    "lam", [0, 1, 2, 5, Fraction(7, 2)]
)
def test_merged_differences_reproduce_riemann_exponents(k, lam):
    actual_return = merged_exponent_differences(k, lam)
    expected = riemann_exponents(k, lam).as_tuple()
    for value, target in zip(actual_return, expected):
        assert complex(value) == pytest.approx(complex(target), abs=1e-9)


def test_zero_degree_raises_value_error():
    with pytest.raises(ValueError):
        singular_exponent_differences(0, 1, 2)
