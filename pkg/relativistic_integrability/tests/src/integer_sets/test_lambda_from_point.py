import pytest
from src.errors import PellError
from src.integer_sets import _lambda_from_point, pell_branch_report


def test_conic_points_give_the_first_elements():
    assert _lambda_from_point(3, (3, 1)) == 1
    assert _lambda_from_point(3, (3, -1)) == 0


def test_point_off_the_conic_raises():
    with pytest.raises(PellError, match="not an integer point"):
        _lambda_from_point(3, (1, 0))


def test_branch_report_solutions_satisfy_the_equation():
    for k in (3, 4, 5, 6):
        for branch in pell_branch_report(k):
            x0, y0 = branch.x0, branch.y0
            assert x0 * x0 - 32 * k * k * y0 * y0 == 64 * k * k * (k * k - 2)
