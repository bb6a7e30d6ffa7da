import pytest
from src.galois_conditions import kimura_solvable, riemann_exponents
from src.integer_sets import enumerate_J_pm


def test_riemann_exponents_at_k3_lambda5():
    actual_return = riemann_exponents(3, 5)
    assert actual_return.rho == pytest.approx(11 / 6)
    assert actual_return.sigma == 0.5
    assert actual_return.tau == pytest.approx(8 / 3)


def test_negative_radicand_gives_complex_exponent():
    actual_return = riemann_exponents(3, -1)
    assert isinstance(actual_return.rho, complex)
    assert actual_return.rho.real == pytest.approx(0)


def test_condition_one():
    actual_return = kimura_solvable(0.5, 0.5, 0.0)
    assert actual_return.solvable
    assert actual_return.case == "ConditionI"


def test_dihedral_schwarz_row():
    actual_return = kimura_solvable(0.5, 0.5, 0.377)
    assert actual_return.solvable
    assert actual_return.case == "SchwarzRow(1)"


def test_unsolvable_exponents():
    actual_return = kimura_solvable(0.2, 0.2, 0.2)
    assert not actual_return.solvable
    assert actual_return.case is None


@pytest.mark.parametrize("k", [3, 4, 5])
def test_integer_set_elements_are_solvable(k):
    for lam in enumerate_J_pm(k, 6):
        actual_return = kimura_solvable(*riemann_exponents(k, lam).as_tuple())
        assert actual_return.solvable, (k, lam)


def test_integer_outside_the_set_is_not_solvable():
    actual_return = kimura_solvable(*riemann_exponents(3, 7).as_tuple())
    assert not actual_return.solvable
