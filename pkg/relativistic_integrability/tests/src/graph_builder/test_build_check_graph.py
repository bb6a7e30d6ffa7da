import json

import pytest
from src.errors import PotentialError
from src.graph_builder import build_check_graph
from src.settings import DEFAULT_TOLERANCES


def _initial_state(path, explain=False):
    return {
        "potential_path": path,
        "tolerances": DEFAULT_TOLERANCES,
        "explain": explain,
        "potential_file": None,
        "potential": None,
        "darboux_points": [],
        "spectra": [],
        "verdict": None,
        "report": None,
    }


def _write_potential(tmp_path, terms, k):
    path = tmp_path / "potential.json"
    path.write_text(
        json.dumps(
            {
                "n": 2,
                "k": k,
                "monomials": [
                    {"c": [c, 0], "e": list(e)} for e, c in terms.items()
                ],
            }
        ),
        encoding="utf-8",
    )
    return path


def test_saddle_oscillator_cannot_be_integrable(tmp_path):
    path = _write_potential(tmp_path, {(2, 0): 1, (0, 2): -1}, k=2)
    graph = build_check_graph()
    actual_return = graph.invoke(_initial_state(path))["report"]
    assert actual_return.verdict == "CannotBeIntegrable"
    assert actual_return.k == 2
    assert len(actual_return.points) == 2
    assert "-1 is not in J+ u J- u J_2" in actual_return.explanation


def test_single_cube_passes(tmp_path):
    path = _write_potential(tmp_path, {(3, 0): 1}, k=3)
    graph = build_check_graph()
    actual_return = graph.invoke(_initial_state(path, explain=True))["report"]
    assert actual_return.verdict == "PassesNecessaryConditions"
    assert actual_return.classical_verdict == "PassesNecessaryConditions"
    (point,) = actual_return.points
    assert point.eigenvalues.trivial == pytest.approx((2.0, 0.0))
    assert point.eigenvalues.rational == ["0/1"]
    (eigenvalue,) = point.checks
    assert eigenvalue.integer == 0
    assert eigenvalue.hits is not None


def test_hits_are_left_out_without_explain(tmp_path):
    path = _write_potential(tmp_path, {(3, 0): 1}, k=3)
    graph = build_check_graph()
    actual_return = graph.invoke(_initial_state(path))["report"]
    assert actual_return.points[0].checks[0].hits is None


def test_non_homogeneous_file_is_rejected(tmp_path):
    path = tmp_path / "hh.json"
    path.write_text(
        json.dumps(
            {
                "n": 2,
                "kind": "polynomial",
                "monomials": [
                    {"c": [0.5, 0], "e": [2, 0]},
                    {"c": [1, 0], "e": [2, 1]},
                ],
            }
        ),
        encoding="utf-8",
    )
    graph = build_check_graph()
    with pytest.raises(PotentialError, match="homogeneous"):
        graph.invoke(_initial_state(path))
