import pytest
from src.algebra import RadialPotential
from src.dynamics import Kinetic
from src.errors import ConfigError
from src.presets import available_presets, load_preset


def test_kepler_preset():
    actual_return = load_preset("kepler")
    assert actual_return.name == "kepler"
    assert actual_return.kinetic is Kinetic.RELATIVISTIC
    assert isinstance(actual_return.potential.to_potential(), RadialPotential)
    assert actual_return.energy(Kinetic.RELATIVISTIC) == pytest.approx(0.9)
    assert actual_return.energy(Kinetic.CLASSICAL) == pytest.approx(-0.1)


def test_every_shipped_preset_loads():
    names = available_presets()
    assert {"kepler", "henon_heiles_b", "cartesian_k10"} <= set(names)
    for name in names:
        assert load_preset(name).name == name


def test_unknown_preset():
    with pytest.raises(ConfigError, match="Known presets"):
        load_preset("no_such_experiment")


def test_invalid_preset(tmp_path):
    (tmp_path / "broken_preset.json").write_text(
        '{"name": "broken", "description": "", "energy_offset": 0.1}',
        encoding="utf-8",
    )
    with pytest.raises(ConfigError, match="is invalid"):
        load_preset("broken", tmp_path)


def test_available_presets_in_an_empty_directory(tmp_path):
    actual_return = available_presets(tmp_path)
    assert actual_return == []
