import json

import pytest
from main import main
from src.file_io import manifest_path_for


def test_jset_prints_to_stdout(capsys):
    actual_return = main(["jset", "--k", "4", "--count", "3", "--format",
                          "text"])
    assert actual_return == 0
    assert capsys.readouterr().out == "0, 1, 10\n"


def test_check_exit_code_one(tmp_path, capsys):
    path = tmp_path / "saddle.json"
    path.write_text(
        json.dumps(
            {
                "n": 2,
                "k": 2,
                "monomials": [
                    {"c": [1, 0], "e": [2, 0]},
                    {"c": [-1, 0], "e": [0, 2]},
                ],
            }
        ),
        encoding="utf-8",
    )
    actual_return = main(["check", "--potential", str(path)])
    assert actual_return == 1
    assert len(json.loads(capsys.readouterr().out)) == 2


def test_missing_potential_is_exit_code_two(tmp_path, capsys):
    actual_return = main(
        ["check", "--potential", str(tmp_path / "missing.json")]
    )
    assert actual_return == 2
    assert "no such file" in capsys.readouterr().err


def test_invalid_potential_is_exit_code_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(
        '{"n": 2, "k": 3, "monomials": [{"c": [1, 0], "e": [1, 1]}]}',
        encoding="utf-8",
    )
    actual_return = main(["check", "--potential", str(path)])
    assert actual_return == 2
    assert "monomials.0.e" in capsys.readouterr().err


def test_zero_k_is_exit_code_two(capsys):
    actual_return = main(["jscan", "--k", "0"])
    assert actual_return == 2


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        main(["integrate-everything"])


def test_replay_rewrites_the_same_output(tmp_path):
    output_path = tmp_path / "jset.csv"
    assert main(
        ["jset", "--k", "5", "--format", "csv", "--out", str(output_path)]
    ) == 0
    first = output_path.read_text(encoding="utf-8")
    output_path.unlink()

    actual_return = main(["--replay", str(manifest_path_for(output_path))])
    assert actual_return == 0
    assert output_path.read_text(encoding="utf-8") == first


def test_check_json_is_an_array_of_points(tmp_path, capsys):
    path = tmp_path / "cube.json"
    path.write_text(
        '{"n": 2, "k": 3, "monomials": [{"c": [1, 0], "e": [3, 0]}]}',
        encoding="utf-8",
    )
    actual_return = main(["check", "--potential", str(path)])
    assert actual_return == 0
    points = json.loads(capsys.readouterr().out)
    assert isinstance(points, list)
    (point,) = points
    assert {"d", "gamma", "residual", "eigenvalues"} <= set(point)
    assert len(point["d"]) == 2
    assert all(len(pair) == 2 for pair in point["d"])
    assert len(point["gamma"]) == 2
    assert isinstance(point["residual"], float)
    eigenvalues = point["eigenvalues"]
    assert set(eigenvalues) == {"trivial", "nontrivial", "rational"}
    assert eigenvalues["trivial"] == pytest.approx([2.0, 0.0])
    (nontrivial,) = eigenvalues["nontrivial"]
    assert nontrivial == pytest.approx([0.0, 0.0], abs=1e-9)
    assert eigenvalues["rational"] == ["0/1"]
