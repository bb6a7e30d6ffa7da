import pytest
from src.integer_sets import (SetName, in_J_k_small, membership_table,
                              square_triangular_membership,
                              triangular_index, triangular_membership)


def test_triangular_numbers():
    actual_return = [t for t in range(12) if triangular_membership(t)]
    assert actual_return == [0, 1, 3, 6, 10]


def test_triangular_index():
    assert triangular_index(10) == 4
    assert triangular_index(11) is None


def test_square_triangular_numbers():
    actual_return = [s for s in range(1300) if square_triangular_membership(s)]
    assert actual_return == [0, 1, 36, 1225]


def test_j1_holds_square_triangular_numbers():
    actual_return = in_J_k_small(1, 36)
    assert actual_return.member
    assert actual_return.set_name == SetName.J_1
    assert actual_return.witness_p == 8


def test_j2_holds_triangular_numbers():
    assert in_J_k_small(2, 6).member
    assert not in_J_k_small(2, 7).member


def test_negative_degrees_shift_by_one():
    assert in_J_k_small(-1, -35).member
    assert in_J_k_small(-2, -5).member
    assert not in_J_k_small(-2, 5).member


def test_large_degree_raises_value_error():
    with pytest.raises(ValueError):
        in_J_k_small(3, 0)


def test_membership_table():
    actual_return = membership_table(4, [0, 1, 2, 10])
    assert actual_return == {0: True, 1: True, 2: False, 10: True}
