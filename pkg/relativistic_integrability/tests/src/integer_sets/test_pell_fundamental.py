import pytest
from src.errors import PellError
from src.integer_sets import (PellSolution, SetName, pell_branch_report,
                              pell_fundamental, recurrence_coefficient)


@pytest.mark.parametrize(
    "D, expected",
    [(2, (3, 2)), (288, (17, 1)), (512, (665857, 29427))],
)
def test_fundamental_solutions(D, expected):
    actual_return = pell_fundamental(D)
    assert (actual_return.U, actual_return.V) == expected


def test_square_discriminant_raises_pell_error():
    with pytest.raises(PellError):
        pell_fundamental(16)


def test_solution_is_checked_on_construction():
    with pytest.raises(PellError):
        PellSolution(U=3, V=1, D=2)


def test_recurrence_coefficient_for_k3():
    actual_return = recurrence_coefficient(3)
    assert actual_return == 4 * 17**2 - 1


def test_branch_report_starts_solve_the_general_pell_equation():
    actual_return = pell_branch_report(3)
    assert actual_return
    for branch in actual_return:
        assert branch.set_name in (SetName.J_PLUS, SetName.J_MINUS)
        assert branch.x0**2 - 288 * branch.y0**2 == 64 * 9 * 7
        assert len(branch.first_values) == 4
