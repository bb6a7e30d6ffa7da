import pytest
from src.algebra import HomogeneousPotential, Polynomial, RadialPotential
from src.catalogue import (cartesian, degree_three, henon_heiles, kepler,
                           parabolic, potential_catalogue, radial_polynomial)
from src.errors import PotentialError


def test_catalogue_returns_named_potentials():
    actual_return = potential_catalogue("cubic_5")
    assert isinstance(actual_return, HomogeneousPotential)
    assert actual_return.terms() == {(3, 0): 1}


def test_unknown_name_raises_key_error():
    with pytest.raises(KeyError):
        potential_catalogue("no_such_potential")


def test_parabolic_quartic_terms():
    actual_return = parabolic(4)
    assert actual_return.terms() == {(0, 4): 1, (2, 2): 3 / 4, (4, 0): 1 / 16}


def test_radial_polynomial_expands_binomially():
    actual_return = radial_polynomial(4)
    assert actual_return.terms() == {(0, 4): 1, (2, 2): 2, (4, 0): 1}


def test_radial_polynomial_needs_even_degree():
    with pytest.raises(PotentialError):
        radial_polynomial(3)


def test_cartesian_needs_positive_degree():
    with pytest.raises(PotentialError):
        cartesian(0)


def test_degree_three_index_out_of_range():
    with pytest.raises(PotentialError):
        degree_three(7)


def test_kepler_and_henon_heiles_types():
    assert isinstance(kepler(), RadialPotential)
    actual_return = henon_heiles(0.5, 0.5)
    assert isinstance(actual_return, Polynomial)
    assert actual_return.terms()[(0, 3)] == pytest.approx(0.5 / 3)
