import numpy as np
from src.integer_sets import integer_density_scan, square_parameters


def test_matches_the_density_scan():
    p_values = np.arange(-1000, 1001, dtype=np.int64)
    actual_return = square_parameters(3, p_values)
    assert actual_return == [0, 2, 6, 76, 212]
    assert tuple(actual_return) == integer_density_scan(3, 1000).parameters


def test_radicand_is_a_square():
    actual_return = square_parameters(3, np.array([2], dtype=np.int64))
    assert actual_return == [2]
    assert 4 * 9 * 2 * 5 + 1 == 19**2


def test_empty_range():
    actual_return = square_parameters(4, np.array([], dtype=np.int64))
    assert actual_return == []
