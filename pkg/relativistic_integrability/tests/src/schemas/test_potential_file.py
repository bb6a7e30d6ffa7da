import pytest
from pydantic import ValidationError
from src.algebra import RadialPotential
from src.catalogue import henon_heiles, kepler, radial_polynomial
from src.schemas import MonomialEntry, PotentialFile


def test_negative_exponent_is_rejected():
    with pytest.raises(ValidationError, match="negative"):
        MonomialEntry(c=(1.0, 0.0), e=[2, -1])


def test_homogeneous_needs_a_degree():
    with pytest.raises(ValidationError, match="non-zero k"):
        PotentialFile(n=2, monomials=[MonomialEntry(c=(1, 0), e=[1, 1])])


def test_polynomial_kind_skips_homogeneity():
    actual_return = PotentialFile.from_potential(henon_heiles(0.5, 0.5))
    assert actual_return.kind == "polynomial"
    V = actual_return.to_potential()
    assert V.terms() == henon_heiles(0.5, 0.5).terms()


def test_radial_kind():
    actual_return = PotentialFile.from_potential(kepler(-0.25))
    assert actual_return.kind == "radial"
    assert actual_return.to_potential() == RadialPotential(-0.25, -1, 2)


def test_radial_needs_a_coefficient():
    with pytest.raises(ValidationError):
        PotentialFile(n=2, k=-1, kind="radial")


def test_homogeneous_file_reproduces_the_potential():
    V = radial_polynomial(4)
    actual_return = PotentialFile.from_potential(V).to_potential()
    assert actual_return == V


def test_too_many_variables():
    with pytest.raises(ValidationError):
        PotentialFile(
            n=9, k=1, monomials=[MonomialEntry(c=(1, 0), e=[1] + [0] * 8)]
        )
