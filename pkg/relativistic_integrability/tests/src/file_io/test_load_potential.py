import json

import pytest
from src.algebra import HomogeneousPotential
from src.errors import PotentialError
from src.file_io import load_potential


def _write(tmp_path, contents):
    path = tmp_path / "potential.json"
    path.write_text(contents, encoding="utf-8")
    return path


def test_valid_cubic(tmp_path):
    path = _write(
        tmp_path,
        json.dumps(
            {
                "n": 2,
                "k": 3,
                "monomials": [
                    {"c": [0.5, 0], "e": [2, 1]},
                    {"c": [1, 0], "e": [0, 3]},
                ],
            }
        ),
    )
    actual_return = load_potential(path).to_potential()
    assert isinstance(actual_return, HomogeneousPotential)
    assert actual_return.terms() == {(2, 1): 0.5, (0, 3): 1}


def test_inhomogeneous_term_names_the_field(tmp_path):
    path = _write(
        tmp_path,
        json.dumps(
            {
                "n": 2,
                "k": 3,
                "monomials": [
                    {"c": [1, 0], "e": [3, 0]},
                    {"c": [1, 0], "e": [1, 1]},
                ],
            }
        ),
    )
    with pytest.raises(PotentialError) as error:
        load_potential(path)
    assert "monomials.1.e: exponents sum to 2, expected k=3" in str(
        error.value
    )


def test_wrong_exponent_length(tmp_path):
    path = _write(
        tmp_path,
        '{"n": 2, "k": 2, "monomials": [{"c": [1, 0], "e": [1, 1, 0]}]}',
    )
    with pytest.raises(PotentialError, match="has 3 exponents"):
        load_potential(path)


def test_duplicate_exponents(tmp_path):
    path = _write(
        tmp_path,
        '{"n": 2, "k": 2, "monomials": [{"c": [1, 0], "e": [1, 1]}, '
        '{"c": [2, 0], "e": [1, 1]}]}',
    )
    with pytest.raises(PotentialError, match="appears twice"):
        load_potential(path)


def test_empty_potential(tmp_path):
    path = _write(tmp_path, '{"n": 2, "k": 2, "monomials": []}')
    with pytest.raises(PotentialError, match="potential has no terms"):
        load_potential(path)


def test_malformed_json_reports_the_position(tmp_path):
    path = _write(tmp_path, '{"n": 2,\n "k": }')
    with pytest.raises(PotentialError, match="line 2"):
        load_potential(path)


def test_missing_file(tmp_path):
    with pytest.raises(PotentialError, match="not found"):
        load_potential(tmp_path / "missing.json")
