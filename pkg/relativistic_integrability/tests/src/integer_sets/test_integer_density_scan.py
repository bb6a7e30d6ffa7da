import pytest
from src.integer_sets import integer_density_scan


def test_k4_up_to_a_million_has_nine_integer_parameters():
    actual_return = integer_density_scan(4, 10**6)
    assert actual_return.parameter_count == 9


def test_k3_parameters_up_to_a_thousand():
    actual_return = integer_density_scan(3, 1000)
    assert actual_return.parameters == (0, 2, 6, 76, 212)
    assert actual_return.hit_count == 10


def test_zero_bound_only_scans_p_zero():
    actual_return = integer_density_scan(1, 0)
    assert actual_return.parameters == (0,)
    assert actual_return.hit_count == 2


def test_chunking_does_not_change_the_result():
    actual_return = integer_density_scan(3, 1000, chunk_size=37)
    assert actual_return.parameters == (0, 2, 6, 76, 212)


def test_bound_out_of_range_raises_value_error():
    with pytest.raises(ValueError):
        integer_density_scan(3, -1)
