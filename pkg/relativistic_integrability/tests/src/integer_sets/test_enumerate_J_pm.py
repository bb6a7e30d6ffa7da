import pytest
from src.integer_sets import enumerate_J_pm, enumerate_J_pm_via_pell

J_TABLES = {
    3: [0, 1, 5, 40, 176, 1365, 5985],
    4: [0, 1, 10, 45, 351, 1540, 11935],
    5: [0, 1, 540, 1729, 18361, 58752],
    6: [0, 1, 21, 56, 736, 1925, 25025],
}


@pytest.mark.parametrize("k", sorted(J_TABLES))
def test_least_elements_match_known_tables(k):
    actual_return = enumerate_J_pm(k, len(J_TABLES[k]))
    assert actual_return == J_TABLES[k]


@pytest.mark.parametrize("k", [3, -3, 4, -4, 5, -5, 6, -6])
def test_pell_recurrence_gives_the_same_elements(k):
    actual_return = enumerate_J_pm_via_pell(k, 12)
    assert actual_return == enumerate_J_pm(k, 12)


def test_count_out_of_range_raises_value_error():
    with pytest.raises(ValueError):
        enumerate_J_pm(3, 0)


def test_zero_degree_raises_value_error():
    with pytest.raises(ValueError):
        enumerate_J_pm(0, 3)
