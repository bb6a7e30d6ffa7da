"""Named potentials used by the worked examples and the presets."""

import logging
from math import comb, sqrt
from typing import Callable, Dict

from .algebra import HomogeneousPotential, Polynomial, RadialPotential
from .errors import PotentialError

# Logger
logger = logging.getLogger(__name__)


def oscillator(alpha: complex = 1, scale: complex = 1) -> HomogeneousPotential:
    """``scale * (q1^2 + alpha q2^2)``."""
    return HomogeneousPotential.from_terms(
        2, {(2, 0): scale, (0, 2): scale * alpha}, k=2
    )


def cartesian(k: int, alpha: complex = 1) -> HomogeneousPotential:
    """Potential separable in Cartesian coordinates, ``q1^k + alpha q2^k``."""
    if k < 1:
        raise PotentialError(f"Cartesian family needs k >= 1, got k={k}")
    return HomogeneousPotential.from_terms(
        2, {(k, 0): 1, (0, k): alpha}, k=k
    )


def single_variable(k: int) -> HomogeneousPotential:
    """``q1^k``; relativistically integrable with the extra integral p2."""
    if k < 1:
        raise PotentialError(f"Need k >= 1, got k={k}")
    return HomogeneousPotential.from_terms(2, {(k, 0): 1}, k=k)


def parabolic(k: int) -> HomogeneousPotential:
    """Potential separable in parabolic coordinates,
    ``sum_i 4^-i C(k-i, i) q1^(2i) q2^(k-2i)`` for ``0 <= i <= k // 2``."""
    if k < 2:
        raise PotentialError(f"Parabolic family needs k >= 2, got k={k}")
    terms = {
        (2 * i, k - 2 * i): comb(k - i, i) / 4**i for i in range(k // 2 + 1)
    }
    return HomogeneousPotential.from_terms(2, terms, k=k)


def radial_polynomial(k: int) -> HomogeneousPotential:
    """``(q1^2 + q2^2)^(k/2)`` for even ``k``."""
    if k < 2 or k % 2:
        raise PotentialError(f"Radial polynomial needs even k >= 2, got {k}")
    half = k // 2
    terms = {(2 * i, k - 2 * i): comb(half, i) for i in range(half + 1)}
    return HomogeneousPotential.from_terms(2, terms, k=k)


def kepler(mu: float = -0.25) -> RadialPotential:
    """``mu / |q|``."""
    return RadialPotential(coefficient=mu, k=-1)


def henon_heiles(alpha: float, beta: float) -> Polynomial:
    """``(q1^2 + q2^2) / 2 + alpha q1^2 q2 + beta q2^3 / 3``."""
    return Polynomial.from_terms(
        2,
        {
            (2, 0): 0.5,
            (0, 2): 0.5,
            (2, 1): alpha,
            (0, 3): beta / 3,
        },
    )


def degree_three(index: int, alpha: complex = 1) -> HomogeneousPotential:
    """The six integrable classical cubic families, numbered 1 to 6.

    ``alpha`` only enters family 1. Families 4 and 6 use the upper sign of
    their conjugate pair.
    """
    builders: Dict[int, Callable[[], Dict]] = {
        1: lambda: {(3, 0): 1, (0, 3): alpha},
        2: lambda: {(2, 1): 0.5, (0, 3): 1},
        3: lambda: {(2, 1): 0.5, (0, 3): 8 / 3},
        4: lambda: {(3, 0): 1j * sqrt(3) / 18, (2, 1): 0.5, (0, 3): 1},
        5: lambda: {(3, 0): 1},
        6: lambda: {(0, 3): 1 / 3, (2, 1): 1, (3, 0): -2j / 3},
    }
    if index not in builders:
        raise PotentialError(f"Cubic families are numbered 1-6, got {index}")
    return HomogeneousPotential.from_terms(2, builders[index](), k=3)


POTENTIAL_CATALOGUE: Dict[str, Callable[[], object]] = {
    "oscillator": lambda: oscillator(1),
    "anti_oscillator": lambda: oscillator(-1),
    **{f"cubic_{i}": (lambda i=i: degree_three(i)) for i in range(1, 7)},
    "quartic_line": lambda: single_variable(4),
    "quartic_radial": lambda: radial_polynomial(4),
    "quintic_line": lambda: single_variable(5),
}


def potential_catalogue(name: str):
    """Looks up a named potential.

    Raises:
        KeyError: If the name is unknown.
    """
    try:
        return POTENTIAL_CATALOGUE[name]()
    except KeyError:
        raise KeyError(
            f"Unknown potential '{name}'. Known: "
            f"{', '.join(sorted(POTENTIAL_CATALOGUE))}"
        )
