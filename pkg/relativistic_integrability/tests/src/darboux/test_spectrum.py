from fractions import Fraction

import numpy as np
import pytest
from src.algebra import HomogeneousPotential
from src.catalogue import cartesian, degree_three, oscillator
from src.darboux import (DarbouxPoint, Normalization, aggregate_spectrum,
                         find_darboux_points, spectrum, trace_shortcut,
                         universal_relation)
from src.errors import DarbouxError, PoleError, ZeroMultiplierError

CUBIC_SPECTRA = {
    1: [0, 0, 2],
    2: [Fraction(1, 3), 5, 5],
    3: [Fraction(1, 8), 15, 15],
    4: [Fraction(1, 3), Fraction(10, 3), 15],
    5: [0],
    6: [2],
}


def _spectra(V):
    return [spectrum(V, point) for point in find_darboux_points(V)]


@pytest.mark.parametrize("index", sorted(CUBIC_SPECTRA))
def test_cubic_family_spectra(index):
    reports = _spectra(degree_three(index))
    actual_return = sorted(
        r for report in reports for r in report.nontrivial_rational
    )
    assert actual_return == sorted(CUBIC_SPECTRA[index])


def test_cartesian_quartic_spectrum():
    actual_return = aggregate_spectrum(_spectra(cartesian(4)))
    np.testing.assert_allclose(actual_return, [0, 0, 3, 3], atol=1e-9)


def test_trivial_eigenvalue_is_k_minus_one():
    for report in _spectra(cartesian(5)):
        assert report.trivial_eigenvalue == pytest.approx(4)


def test_trace_shortcut_agrees_with_spectrum():
    V = degree_three(2)
    for point in find_darboux_points(V):
        actual_return = trace_shortcut(V, point)
        assert actual_return == pytest.approx(
            spectrum(V, point).nontrivial[0], abs=1e-9
        )


def test_oscillator_spectra():
    isotropic = _spectra(oscillator(1))
    assert isotropic[0].nontrivial_rational == (Fraction(1),)
    anti = aggregate_spectrum(_spectra(oscillator(-1)))
    np.testing.assert_allclose(anti, [-1, -1], atol=1e-12)


def test_zero_multiplier_raises():
    point = DarbouxPoint(
        d=(1, 0), gamma=0, residual=0.0, normalization=Normalization.GAMMA_RAW
    )
    with pytest.raises(ZeroMultiplierError):
        spectrum(oscillator(1), point)


def test_non_darboux_direction_raises():
    point = DarbouxPoint(
        d=(1, 1), gamma=1, residual=0.0, normalization=Normalization.GAMMA_ONE
    )
    with pytest.raises(DarbouxError):
        spectrum(degree_three(5), point)


def test_universal_relation_holds_for_cartesian_quartic():
    actual_return = universal_relation([0, 0, 3, 3])
    assert abs(actual_return) <= 1e-12


def test_universal_relation_pole():
    with pytest.raises(PoleError):
        universal_relation([1, 2])


@pytest.mark.parametrize("k", [3, 4])
def test_universal_relation_for_random_potentials(k):
    rng = np.random.default_rng(20240517 + k)
    checked = 0
    for _ in range(20):
        real = rng.uniform(-1, 1, k + 1)
        imag = rng.uniform(-1, 1, k + 1)
        terms = {(k - j, j): real[j] + 1j * imag[j] for j in range(k + 1)}
        V = HomogeneousPotential.from_terms(2, terms, k=k)
        points = find_darboux_points(V)
        if len(points) != k:
            continue
        lambdas = aggregate_spectrum([spectrum(V, p) for p in points])
        actual_return = universal_relation(lambdas)
        assert abs(actual_return) <= 1e-8
        checked += 1
    assert checked >= 15
