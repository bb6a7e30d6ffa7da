import numpy as np
import pytest
from src.dynamics import (Kinetic, conservation_audit, integrate,
                          poincare_section, section_dispersion,
                          section_hull_area, seed_section_states)
from src.presets import load_preset
from src.settings import IntegratorSettings

TIGHT = IntegratorSettings(rtol=1e-12, atol=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize(
    "name",
    [
        "kepler",
        "isotropic_oscillator",
        "anisotropic_oscillator",
        "henon_heiles_a",
        "henon_heiles_b",
        "henon_heiles_c",
    ],
)
def test_first_integrals_over_a_thousand_time_units(name):
    preset = load_preset(name)
    V = preset.potential.to_potential()
    energy = preset.energy(Kinetic.RELATIVISTIC)
    state0 = seed_section_states(
        V, Kinetic.RELATIVISTIC, energy, preset.seed_grid
    )[0]
    trajectory = integrate(V, Kinetic.RELATIVISTIC, state0, 1000.0, TIGHT)
    actual_return = conservation_audit(V, Kinetic.RELATIVISTIC, trajectory)
    assert actual_return.energy_drift <= 1e-8 * max(1.0, abs(energy))
    assert actual_return.casimir_drift <= 1e-9 * max(1.0, state0.u**2)
    if name in ("kepler", "isotropic_oscillator"):
        assert actual_return.angular_momentum_drift <= 1e-8


@pytest.mark.slow
def test_relativistic_kepler_sections_are_closed_curves():
    preset = load_preset("kepler")
    V = preset.potential.to_potential()
    energy = preset.energy(Kinetic.RELATIVISTIC)
    states = seed_section_states(
        V, Kinetic.RELATIVISTIC, energy, preset.seed_grid
    )
    sections = poincare_section(
        V, Kinetic.RELATIVISTIC, states, preset.t_end, energy
    )
    for orbit in sections:
        if len(orbit.points) >= 20:
            assert section_dispersion(orbit.coordinates) < 0.35


@pytest.mark.slow
def test_relativistic_henon_heiles_has_an_irregular_orbit():
    preset = load_preset("henon_heiles_b")
    V = preset.potential.to_potential()
    energy = preset.energy(Kinetic.RELATIVISTIC)
    states = seed_section_states(
        V, Kinetic.RELATIVISTIC, energy, preset.seed_grid
    )
    sections = poincare_section(
        V, Kinetic.RELATIVISTIC, states, preset.t_end, energy
    )
    dispersions = [section_dispersion(o.coordinates) for o in sections]
    irregular = sections[int(np.argmax(dispersions))]
    assert max(dispersions) > 0.3
    assert section_hull_area(irregular.coordinates) > 0.05
