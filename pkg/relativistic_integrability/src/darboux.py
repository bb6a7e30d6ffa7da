"""Darboux points of planar homogeneous potentials and the spectra of the
scaled Hessian at them.

A Darboux point is a non-zero ``d`` with ``V'(d) = gamma d`` and
``gamma != 0``. Directions are enumerated projectively: ``d = (1, t)`` with
``t`` a root of ``W(t) = dV/dq2(1, t) - t dV/dq1(1, t)``, plus the direction
``(0, 1)`` tested on its own.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (HomogeneousPotential, principal_root,
                      reconstruct_rational, roots_univariate)
from .errors import DarbouxError, PoleError, ZeroMultiplierError
from .settings import DEFAULT_TOLERANCES, Tolerances

# Logger
logger = logging.getLogger(__name__)

ROOT_MERGE_DISTANCE: float = 1e-9


class Normalization(str, Enum):
    """How the multiplier of a Darboux point was fixed."""

    GAMMA_ONE = "GammaOne"
    GAMMA_RAW = "GammaRaw"


@dataclass(frozen=True)
class DarbouxPoint:
    """A direction ``d`` with ``V'(d) = gamma d``.

    Attributes:
        d: Complex direction.
        gamma: Multiplier.
        residual: ``max |V'(d) - gamma d|``.
        normalization: ``GammaOne`` once ``d`` has been rescaled so that
            ``gamma = 1``; ``GammaRaw`` for quadratic potentials, where
            rescaling cannot change ``gamma``.
        multiplicity: Multiplicity of ``t`` as a root of ``W``.
        continuum: Set when every direction is a Darboux point and ``d`` is
            only a representative.
    """

    d: Tuple[complex, ...]
    gamma: complex
    residual: float
    normalization: Normalization
    multiplicity: int = 1
    continuum: bool = False

    @property
    def direction(self) -> np.ndarray:
        return np.array(self.d, dtype=complex)


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of ``gamma^-1 V''(d)`` split into the trivial one and
    the rest."""

    trivial_eigenvalue: complex
    nontrivial: Tuple[complex, ...]
    nontrivial_rational: Tuple[Optional[Fraction], ...]
    point: Optional[DarbouxPoint] = field(default=None, compare=False)

    @property
    def all_rational(self) -> bool:
        return all(r is not None for r in self.nontrivial_rational)

    @property
    def all_integer(self) -> bool:
        return all(
            r is not None and r.denominator == 1
            for r in self.nontrivial_rational
        )


def darboux_polynomial(V: HomogeneousPotential) -> np.ndarray:
    """Coefficients of ``W(t)``, highest degree first (length ``k + 1``)."""
    if V.n != 2:
        raise DarbouxError(
            f"Darboux points are only located for n=2, got n={V.n}"
        )
    # a + b = k and a >= 1 in the second term, so the degree is at most k
    by_power = np.zeros(V.k + 1, dtype=complex)
    for monomial in V.monomials:
        a, b = monomial.exponents
        if b >= 1:
            by_power[b - 1] += monomial.coefficient * b
        if a >= 1:
            by_power[b + 1] -= monomial.coefficient * a
    return by_power[::-1]


def _coefficient_scale(V: HomogeneousPotential) -> float:
    return float(sum(abs(m.coefficient) for m in V.monomials))


def _residual(V: HomogeneousPotential, d: np.ndarray, gamma: complex) -> float:
    return float(np.max(np.abs(V.gradient(d) - gamma * d)))


def _normalize(
    V: HomogeneousPotential, d: np.ndarray, gamma: complex
) -> Tuple[np.ndarray, complex, Normalization]:
    if V.k == 2:
        return d, gamma, Normalization.GAMMA_RAW
    alpha = principal_root(gamma, -(V.k - 2))
    return alpha * d, 1.0 + 0j, Normalization.GAMMA_ONE


def _merge_roots(roots: Sequence[complex]) -> List[Tuple[complex, int]]:
    merged: List[Tuple[complex, int]] = []
    for root in roots:
        if merged and abs(root - merged[-1][0]) <= ROOT_MERGE_DISTANCE * max(
            1.0, abs(root)
        ):
            merged[-1] = (merged[-1][0], merged[-1][1] + 1)
        else:
            merged.append((root, 1))
    return merged


def _accept(
    V: HomogeneousPotential,
    d: np.ndarray,
    gamma: complex,
    multiplicity: int,
    tolerances: Tolerances,
    continuum: bool = False,
) -> Optional[DarbouxPoint]:
    scale = _coefficient_scale(V) * max(1.0, float(np.max(np.abs(d)))) ** (
        V.k - 1
    )
    if abs(gamma) <= tolerances.darboux_residual * scale:
        logger.debug(f"Direction {d} has gamma={gamma}; excluded")
        return None
    d, gamma, normalization = _normalize(V, d, gamma)
    residual = _residual(V, d, gamma)
    bound = tolerances.darboux_residual * max(
        1.0, abs(gamma) * float(np.linalg.norm(d))
    )
    if residual > bound:
        logger.warning(
            f"Dropping candidate direction {d}: residual {residual:.3e} "
            f"exceeds {bound:.3e}"
        )
        return None
    if multiplicity > 1:
        logger.warning(
            f"Direction {d} is a root of multiplicity {multiplicity}; "
            "reported once"
        )
    return DarbouxPoint(
        d=tuple(complex(x) for x in d),
        gamma=complex(gamma),
        residual=residual,
        normalization=normalization,
        multiplicity=multiplicity,
        continuum=continuum,
    )


def find_darboux_points(
    V: HomogeneousPotential, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> List[DarbouxPoint]:
    """Locates every projective class of Darboux points of a planar
    potential.

    Args:
        V: Homogeneous potential with ``n = 2``.
        tolerances: Root-polishing and residual tolerances.

    Returns:
        Points ordered by their ``t`` coordinate, with ``(0, 1)`` last.
        Directions with ``gamma = 0`` are excluded, so the list may be
        empty. When ``W`` vanishes identically a single representative
        ``(1, 0)`` flagged as ``continuum`` is returned.

    Raises:
        DarbouxError: If ``n != 2`` or the potential is zero.
    """
    if V.is_zero:
        raise DarbouxError("Potential is identically zero.")
    w_coefficients = darboux_polynomial(V)
    scale = _coefficient_scale(V)

    if np.all(np.abs(w_coefficients) <= 1e-14 * scale):
        logger.info("Every direction is a Darboux point; using (1, 0)")
        d = np.array([1.0, 0.0], dtype=complex)
        point = _accept(
            V, d, V.gradient(d)[0], 1, tolerances, continuum=True
        )
        return [point] if point is not None else []

    nonzero = np.flatnonzero(np.abs(w_coefficients) > 1e-14 * scale)
    w_coefficients = w_coefficients[nonzero[0]:]
    points: List[DarbouxPoint] = []
    if len(w_coefficients) > 1:
        roots = roots_univariate(
            w_coefficients, residual_tolerance=tolerances.root_residual
        )
        for t, multiplicity in _merge_roots(roots):
            d = np.array([1.0, t], dtype=complex)
            point = _accept(
                V, d, V.gradient(d)[0], multiplicity, tolerances
            )
            if point is not None:
                points.append(point)

    vertical = np.array([0.0, 1.0], dtype=complex)
    vertical_gradient = V.gradient(vertical)
    if abs(vertical_gradient[0]) <= 1e-14 * scale:
        point = _accept(V, vertical, vertical_gradient[1], 1, tolerances)
        if point is not None:
            points.append(point)

    if not points:
        logger.warning(
            "No Darboux point with non-zero gamma; the potential gives no "
            "obstruction"
        )
    logger.info(f"Found {len(points)} Darboux point(s)")
    return points


def spectrum(
    V: HomogeneousPotential,
    pt: DarbouxPoint,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> SpectrumReport:
    """Eigenvalues of ``gamma^-1 V''(d)``.

    The eigenvalue closest to ``k - 1`` is reported as trivial; every other
    eigenvalue is snapped to a fraction when it is real within
    ``tolerances.imaginary_cut``.

    Raises:
        ZeroMultiplierError: If ``pt.gamma`` is zero.
        DarbouxError: If ``pt`` is not a Darboux point of ``V`` or no
            eigenvalue equals ``k - 1``.
    """
    if pt.gamma == 0:
        raise ZeroMultiplierError("Darboux point has gamma = 0.")
    d = pt.direction
    residual = _residual(V, d, pt.gamma)
    bound = tolerances.darboux_residual * max(
        1.0, abs(pt.gamma) * float(np.linalg.norm(d))
    )
    if residual > bound:
        raise DarbouxError(
            f"d={pt.d} is not a Darboux point: residual {residual:.3e} "
            f"exceeds {bound:.3e}"
        )

    eigenvalues = np.linalg.eigvals(V.hessian(d) / pt.gamma)
    trivial_index = int(np.argmin(np.abs(eigenvalues - (V.k - 1))))
    trivial = complex(eigenvalues[trivial_index])
    if abs(trivial - (V.k - 1)) > 1e-8 * max(1, abs(V.k - 1)):
        raise DarbouxError(
            f"No eigenvalue equals k-1={V.k - 1}; closest is {trivial}"
        )
    rest = sorted(
        (complex(x) for i, x in enumerate(eigenvalues) if i != trivial_index),
        key=lambda z: (round(z.real, 9), round(z.imag, 9)),
    )
    rational = tuple(
        reconstruct_rational(
            z.real,
            max_denominator=tolerances.max_denominator,
            tolerance=tolerances.reconstruction,
        )
        if abs(z.imag) <= tolerances.imaginary_cut
        else None
        for z in rest
    )
    logger.debug(f"Spectrum at d={pt.d}: trivial={trivial}, rest={rest}")
    return SpectrumReport(
        trivial_eigenvalue=trivial,
        nontrivial=tuple(rest),
        nontrivial_rational=rational,
        point=pt,
    )


def trace_shortcut(V: HomogeneousPotential, pt: DarbouxPoint) -> complex:
    """The single non-trivial eigenvalue of a planar potential,
    ``gamma^-1 tr V''(d) - (k - 1)``."""
    if V.n != 2:
        raise DarbouxError(f"Trace shortcut needs n=2, got n={V.n}")
    if pt.gamma == 0:
        raise ZeroMultiplierError("Darboux point has gamma = 0.")
    return complex(np.trace(V.hessian(pt.direction)) / pt.gamma - (V.k - 1))


def aggregate_spectrum(reports: Sequence[SpectrumReport]) -> List[complex]:
    """Non-trivial eigenvalues of all points as one sorted multiset."""
    values = [z for report in reports for z in report.nontrivial]
    return sorted(values, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def universal_relation(lambdas: Sequence[complex]) -> complex:
    """Returns ``sum 1 / (lambda_i - 1) + 1``; zero when the relation holds.

    Raises:
        PoleError: If some ``lambda_i`` equals 1.
    """
    total = 0j
    for value in lambdas:
        if abs(value - 1) <= 1e-12:
            raise PoleError(
                f"Eigenvalue {value} equals 1; the relation does not apply."
            )
        total += 1 / (complex(value) - 1)
    return total + 1
