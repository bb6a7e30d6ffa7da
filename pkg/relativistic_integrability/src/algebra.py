"""Polynomial potentials, radial potentials, univariate roots and rational
reconstruction.

Coefficients are complex doubles. Exactness is recovered downstream: the
eigenvalues computed from these objects are snapped to fractions with
:func:`reconstruct_rational`, and all set-membership arithmetic works on
Python integers and :class:`fractions.Fraction`.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import (DimensionMismatchError, PoleError, PotentialError,
                     RootFindingError)

# Logger
logger = logging.getLogger(__name__)

Rational = Fraction
Exponents = Tuple[int, ...]

MAX_VARIABLES: int = 8
NEWTON_ITERATIONS: int = 60
CLUSTER_RADIUS: float = 1e-4


@dataclass(frozen=True)
class Monomial:
    """One term ``coefficient * prod(q_j ** exponents[j])``."""

    coefficient: complex
    exponents: Exponents

    def __post_init__(self):
        coefficient = complex(self.coefficient)
        if not (math.isfinite(coefficient.real)
                and math.isfinite(coefficient.imag)):
            raise PotentialError(
                f"Coefficient of {self.exponents} is not finite: "
                f"{coefficient}"
            )
        if coefficient == 0:
            raise PotentialError(
                f"Coefficient of {self.exponents} must be non-zero."
            )
        if any(e < 0 for e in self.exponents):
            raise PotentialError(
                f"Exponents must be non-negative, got {self.exponents}."
            )
        object.__setattr__(self, "coefficient", coefficient)
        object.__setattr__(
            self, "exponents", tuple(int(e) for e in self.exponents)
        )

    @property
    def degree(self) -> int:
        return sum(self.exponents)


@dataclass(frozen=True)
class Polynomial:
    """A polynomial in ``n`` variables with complex coefficients.

    Evaluation, gradient and Hessian are vectorised over the monomials.
    Derivative polynomials are built once and cached, so the Hessian is
    assembled from the same term lists in both triangles and is exactly
    symmetric.
    """

    n: int
    monomials: Tuple[Monomial, ...]

    def __post_init__(self):
        if self.n < 1:
            raise PotentialError(f"Need at least one variable, got n={self.n}")
        if self.n > MAX_VARIABLES:
            raise PotentialError(
                f"At most {MAX_VARIABLES} variables are supported, "
                f"got n={self.n}"
            )
        object.__setattr__(self, "monomials", tuple(self.monomials))
        seen = set()
        for index, monomial in enumerate(self.monomials):
            if len(monomial.exponents) != self.n:
                raise DimensionMismatchError(
                    f"monomials.{index}.e has length "
                    f"{len(monomial.exponents)}, expected n={self.n}"
                )
            if monomial.exponents in seen:
                raise PotentialError(
                    f"monomials.{index}.e: exponent vector "
                    f"{list(monomial.exponents)} appears twice"
                )
            seen.add(monomial.exponents)

    @classmethod
    def from_terms(
        cls, n: int, terms: Mapping[Sequence[int], complex]
    ) -> "Polynomial":
        """Builds a polynomial from ``{exponents: coefficient}``, dropping
        zero coefficients."""
        monomials = [
            Monomial(coefficient=c, exponents=tuple(e))
            for e, c in terms.items()
            if c != 0
        ]
        return cls(n=n, monomials=tuple(monomials))

    def terms(self) -> Dict[Exponents, complex]:
        return {m.exponents: m.coefficient for m in self.monomials}

    @property
    def is_zero(self) -> bool:
        return len(self.monomials) == 0

    @property
    def is_real(self) -> bool:
        return all(m.coefficient.imag == 0 for m in self.monomials)

    @cached_property
    def _coefficients(self) -> np.ndarray:
        values = [m.coefficient for m in self.monomials]
        if self.is_real:
            return np.array([v.real for v in values], dtype=float)
        return np.array(values, dtype=complex)

    @cached_property
    def _exponents(self) -> np.ndarray:
        return np.array(
            [m.exponents for m in self.monomials], dtype=int
        ).reshape(len(self.monomials), self.n)

    def derivative(self, index: int) -> "Polynomial":
        """Partial derivative with respect to ``q[index]``."""
        return self._first_derivatives[index]

    @cached_property
    def _first_derivatives(self) -> Tuple["Polynomial", ...]:
        derivatives = []
        for index in range(self.n):
            terms: Dict[Exponents, complex] = {}
            for monomial in self.monomials:
                power = monomial.exponents[index]
                if power == 0:
                    continue
                lowered = list(monomial.exponents)
                lowered[index] -= 1
                terms[tuple(lowered)] = monomial.coefficient * power
            derivatives.append(Polynomial.from_terms(self.n, terms))
        return tuple(derivatives)

    @cached_property
    def _second_derivatives(self) -> Tuple[Tuple["Polynomial", ...], ...]:
        rows = []
        for i in range(self.n):
            rows.append(
                tuple(
                    self._first_derivatives[min(i, j)].derivative(max(i, j))
                    for j in range(self.n)
                )
            )
        return tuple(rows)

    def _check_point(self, q) -> np.ndarray:
        point = np.asarray(q)
        if point.ndim != 1 or point.shape[0] != self.n:
            raise DimensionMismatchError(
                f"Potential has n={self.n} variables but q has shape "
                f"{point.shape}."
            )
        return point

    def _evaluate(self, point: np.ndarray):
        if self.is_zero:
            return np.zeros((), dtype=np.result_type(point, float))[()]
        powers = np.prod(point[np.newaxis, :] ** self._exponents, axis=1)
        return np.dot(self._coefficients, powers)

    def value(self, q):
        """Value of the polynomial at ``q``."""
        return self._evaluate(self._check_point(q))

    def gradient(self, q) -> np.ndarray:
        """Vector of first partial derivatives at ``q``."""
        point = self._check_point(q)
        return np.array(
            [d._evaluate(point) for d in self._first_derivatives]
        )

    def hessian(self, q) -> np.ndarray:
        """Symmetric matrix of second partial derivatives at ``q``."""
        point = self._check_point(q)
        return np.array(
            [
                [entry._evaluate(point) for entry in row]
                for row in self._second_derivatives
            ]
        )

    def __call__(self, q):
        return self.value(q)


class HomogeneousPotential(Polynomial):
    """A homogeneous polynomial potential of degree ``k``.

    Every exponent vector must sum to ``k`` and the potential must not be
    identically zero.
    """

    def __init__(self, n: int, k: int, monomials: Sequence[Monomial]):
        object.__setattr__(self, "k", int(k))
        super().__init__(n=n, monomials=tuple(monomials))

    def __post_init__(self):
        super().__post_init__()
        if self.k == 0:
            raise PotentialError("Degree k must be non-zero.")
        if self.is_zero:
            raise PotentialError("monomials: potential is identically zero")
        for index, monomial in enumerate(self.monomials):
            if monomial.degree != self.k:
                raise PotentialError(
                    f"monomials.{index}.e: exponents sum to "
                    f"{monomial.degree}, expected k={self.k}"
                )

    @property
    def degree(self) -> int:
        return self.k

    @classmethod
    def from_terms(
        cls,
        n: int,
        terms: Mapping[Sequence[int], complex],
        k: Optional[int] = None,
    ) -> "HomogeneousPotential":
        monomials = [
            Monomial(coefficient=c, exponents=tuple(e))
            for e, c in terms.items()
            if c != 0
        ]
        if k is None:
            if not monomials:
                raise PotentialError(
                    "monomials: potential is identically zero"
                )
            k = monomials[0].degree
        return cls(n=n, k=k, monomials=monomials)

    def scaled(self, factor: complex) -> "HomogeneousPotential":
        """Returns ``factor * V``."""
        return HomogeneousPotential.from_terms(
            self.n,
            {m.exponents: factor * m.coefficient for m in self.monomials},
            k=self.k,
        )

    def __repr__(self) -> str:
        return (
            f"HomogeneousPotential(n={self.n}, k={self.k}, "
            f"terms={len(self.monomials)})"
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousPotential):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and self.terms() == other.terms()
        )

    def __hash__(self) -> int:
        return hash((self.n, self.k, frozenset(self.terms().items())))


@dataclass(frozen=True)
class RadialPotential:
    """``V(q) = coefficient * |q| ** k``, with ``k`` a non-zero integer.

    Covers the non-polynomial members of the radial family, e.g. the
    Kepler potential ``mu / |q|`` (``k = -1``).
    """

    coefficient: float
    k: int
    n: int = 2

    def __post_init__(self):
        if self.k == 0:
            raise PotentialError("Degree k must be non-zero.")
        if self.coefficient == 0:
            raise PotentialError("Radial coefficient must be non-zero.")

    @property
    def degree(self) -> int:
        return self.k

    def _radius(self, q) -> Tuple[np.ndarray, float]:
        point = np.asarray(q, dtype=float)
        if point.ndim != 1 or point.shape[0] != self.n:
            raise DimensionMismatchError(
                f"Potential has n={self.n} variables but q has shape "
                f"{point.shape}."
            )
        radius = float(np.linalg.norm(point))
        if radius == 0 and self.k < 2:
            raise PoleError(
                f"Radial potential of degree {self.k} is singular at q=0."
            )
        return point, radius

    def value(self, q) -> float:
        _, radius = self._radius(q)
        return self.coefficient * radius**self.k

    def gradient(self, q) -> np.ndarray:
        point, radius = self._radius(q)
        if radius == 0:
            return np.zeros(self.n)
        return self.coefficient * self.k * radius ** (self.k - 2) * point

    def hessian(self, q) -> np.ndarray:
        point, radius = self._radius(q)
        if radius == 0:
            scale = self.coefficient * self.k if self.k == 2 else 0.0
            return scale * np.eye(self.n)
        outer = np.outer(point, point) / radius**2
        return (
            self.coefficient
            * self.k
            * radius ** (self.k - 2)
            * (np.eye(self.n) + (self.k - 2) * outer)
        )

    def __call__(self, q) -> float:
        return self.value(q)


def evaluate(V: Polynomial, q) -> complex:
    """Value of ``V`` at ``q``."""
    return V.value(q)


def gradient(V: Polynomial, q) -> np.ndarray:
    """Gradient ``V'(q)``."""
    return V.gradient(q)


def hessian(V: Polynomial, q) -> np.ndarray:
    """Hessian ``V''(q)``."""
    return V.hessian(q)


def _residual_scale(coefficients: np.ndarray, z: complex) -> float:
    magnitude = abs(z)
    degree = len(coefficients) - 1
    return float(
        sum(
            abs(c) * magnitude ** (degree - i)
            for i, c in enumerate(coefficients)
        )
    )


def _newton_polish(
    coefficients: np.ndarray, z: complex, order: int
) -> complex:
    """Newton iteration on the ``order``-th derivative of the polynomial."""
    target = np.polyder(coefficients, order) if order else coefficients
    slope = np.polyder(target)
    for _ in range(NEWTON_ITERATIONS):
        derivative_value = np.polyval(slope, z)
        if derivative_value == 0:
            break
        step = np.polyval(target, z) / derivative_value
        z = z - step
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(z)):
            break
    return complex(z)


def _cluster(raw_roots: np.ndarray) -> List[List[complex]]:
    clusters: List[List[complex]] = []
    for root in sorted(raw_roots, key=lambda z: (z.real, z.imag)):
        for cluster in clusters:
            centre = sum(cluster) / len(cluster)
            if abs(root - centre) <= CLUSTER_RADIUS * max(1.0, abs(centre)):
                cluster.append(complex(root))
                break
        else:
            clusters.append([complex(root)])
    return clusters


def _root_order_key(z: complex) -> Tuple[float, float]:
    return (round(z.real, 9), round(z.imag, 9))


def roots_univariate(
    coeffs: Sequence[complex], residual_tolerance: float = 1e-12
) -> List[complex]:
    """All complex roots of a univariate polynomial, with multiplicity.

    Roots start from the companion-matrix eigenvalues and are polished by
    Newton iteration. Nearby eigenvalues are merged into one multiple root
    and polished on the derivative of matching order.

    Args:
        coeffs: Coefficients, highest degree first.
        residual_tolerance: Accepted ``|p(z)|`` relative to
            ``sum |c_i| |z|^i``.

    Returns:
        The roots ordered by real part, then imaginary part.

    Raises:
        ValueError: For the zero polynomial, a zero leading coefficient or
            a constant.
        RootFindingError: If a root cannot be polished to the tolerance.
    """
    coefficients = np.asarray(coeffs, dtype=complex)
    if coefficients.size == 0 or not np.any(coefficients):
        raise ValueError("Cannot find roots of the zero polynomial.")
    if coefficients[0] == 0:
        raise ValueError("Leading coefficient must be non-zero.")
    if coefficients.size < 2:
        raise ValueError("Polynomial must have degree >= 1.")

    roots: List[complex] = []
    for cluster in _cluster(np.roots(coefficients)):
        roots.extend(
            _polish_cluster(coefficients, cluster, residual_tolerance)
        )
    return sorted(roots, key=_root_order_key)


def _polish_cluster(
    coefficients: np.ndarray,
    cluster: List[complex],
    residual_tolerance: float,
) -> List[complex]:
    """Polishes a group of nearby eigenvalues as one multiple root, or as
    separate simple roots when the merged root fails the residual test."""

    def acceptable(z: complex) -> bool:
        return abs(np.polyval(coefficients, z)) <= (
            residual_tolerance * _residual_scale(coefficients, z)
        )

    multiplicity = len(cluster)
    merged = _newton_polish(
        coefficients, sum(cluster) / multiplicity, multiplicity - 1
    )
    if acceptable(merged):
        return [merged] * multiplicity
    if multiplicity > 1:
        logger.debug(
            f"Cluster of {multiplicity} near {merged} is not a multiple "
            "root; polishing members separately"
        )
        separate = [_newton_polish(coefficients, z, 0) for z in cluster]
        if all(acceptable(z) for z in separate):
            return separate
    logger.error(
        f"Root polishing failed near {cluster[0]} "
        f"(cluster of {multiplicity})"
    )
    raise RootFindingError(
        f"Newton polishing did not converge near {cluster[0]}."
    )


def continued_fraction(value: Fraction) -> Iterator[int]:
    """Partial quotients of the exact continued fraction of ``value``."""
    numerator, denominator = value.numerator, value.denominator
    while denominator:
        quotient, remainder = divmod(numerator, denominator)
        yield quotient
        numerator, denominator = denominator, remainder


def convergents(value: Fraction) -> Iterator[Fraction]:
    """Successive continued-fraction convergents of ``value``."""
    h_prev, h_curr = 0, 1
    k_prev, k_curr = 1, 0
    for quotient in continued_fraction(value):
        h_prev, h_curr = h_curr, quotient * h_curr + h_prev
        k_prev, k_curr = k_curr, quotient * k_curr + k_prev
        yield Fraction(h_curr, k_curr)


def reconstruct_rational(
    x: float, max_denominator: int = 1_000_000, tolerance: float = 1e-8
) -> Optional[Fraction]:
    """Snaps a float to the simplest nearby fraction.

    Args:
        x: Value to reconstruct.
        max_denominator: Largest denominator accepted.
        tolerance: Largest ``|x - p/q|`` accepted.

    Returns:
        The integer nearest to ``x`` when it is within tolerance, otherwise
        the first continued-fraction convergent within tolerance whose
        denominator does not exceed ``max_denominator``, otherwise None.

    Raises:
        ValueError: If ``max_denominator < 1`` or ``tolerance <= 0``.
    """
    if max_denominator < 1:
        raise ValueError(
            f"max_denominator must be >= 1, got {max_denominator}"
        )
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    if not math.isfinite(x):
        return None

    nearest = round(x)
    if abs(x - nearest) <= tolerance:
        return Fraction(nearest)

    for convergent in convergents(Fraction(x)):
        if convergent.denominator > max_denominator:
            break
        if abs(x - convergent) <= tolerance:
            return convergent
    return None


def principal_root(value: complex, order: float) -> complex:
    """Principal ``value ** (1 / order)``."""
    if value == 0:
        return 0j
    return cmath.exp(cmath.log(complex(value)) / order)
