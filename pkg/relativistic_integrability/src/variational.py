"""Straight-line particular solutions and the variational equation along
them.

Along a Darboux point ``d`` with ``V'(d) = gamma d`` the relativistic
equations admit ``q(t) = phi(t) d``. After the change of variable
``z = gamma d^2 phi^k / k`` the normal variational equation becomes
``w'' + p(z) w' + q(z) w = 0`` with regular singular points at ``z = 0``,
``z = s - 1``, ``z = s + 1`` and infinity, where ``s = d^2 e`` and ``e``
is the energy of the particular solution. The reduced form
``w'' = r(z) w`` uses ``r = p^2 / 4 + p' / 2 - q``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import sympy
from scipy.integrate import solve_ivp

from .algebra import HomogeneousPotential
from .darboux import DarbouxPoint
from .errors import (DarbouxError, IntegrationError, PoleError,
                     SubluminalityError)
from .settings import DEFAULT_INTEGRATOR, IntegratorSettings

# Logger
logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]
POLE_DISTANCE: float = 1e-12
LINE_RESIDUAL_TOLERANCE: float = 1e-10


@dataclass(frozen=True)
class LineSolutionParams:
    """Data of the particular solution ``q(t) = phi(t) d``.

    Attributes:
        d: Real Darboux direction.
        gamma: Multiplier with ``V'(d) = gamma d``.
        k: Degree of the potential.
        energy_e: Value of :func:`line_energy` along the solution.
    """

    d: Tuple[float, ...]
    gamma: float
    k: int
    energy_e: float

    @property
    def d_squared(self) -> float:
        return float(np.dot(self.d, self.d))

    @property
    def s(self) -> float:
        return self.d_squared * self.energy_e

    @classmethod
    def from_darboux_point(
        cls,
        V: HomogeneousPotential,
        point: DarbouxPoint,
        phi0: float,
        phidot0: float,
    ) -> "LineSolutionParams":
        """Builds the parameters of the solution through ``(phi0, phidot0)``.

        Raises:
            DarbouxError: If the point is complex or not a Darboux point of
                ``V`` to within ``1e-10``.
            SubluminalityError: If ``|phidot0 d| >= 1``.
        """
        d = np.asarray(point.d)
        if np.max(np.abs(d.imag)) > 0 or abs(point.gamma.imag) > 0:
            raise DarbouxError(
                f"Line solutions need a real Darboux point, got d={point.d}"
            )
        d = d.real
        gamma = point.gamma.real
        residual = float(np.max(np.abs(V.gradient(d) - gamma * d)))
        if residual > LINE_RESIDUAL_TOLERANCE:
            raise DarbouxError(
                f"V'(d) - gamma d has residual {residual:.3e} at d={d}"
            )
        provisional = cls(tuple(d), gamma, V.k, 0.0)
        energy = line_energy(phi0, phidot0, provisional)
        return cls(tuple(float(x) for x in d), float(gamma), V.k, energy)


def _lorentz_factor_inverse(phidot: float, params: LineSolutionParams):
    speed_squared = phidot**2 * params.d_squared
    if speed_squared >= 1:
        raise SubluminalityError(
            f"|phidot d|^2 = {speed_squared} is not below 1."
        )
    return np.sqrt(1 - speed_squared)


def line_solution_rhs(
    phi: float, phidot: float, params: LineSolutionParams
) -> float:
    """``phi'' = -gamma (1 - phidot^2 d^2)^(3/2) phi^(k-1)``."""
    root = _lorentz_factor_inverse(phidot, params)
    return -params.gamma * root**3 * phi ** (params.k - 1)


def line_energy(
    phi: float, phidot: float, params: LineSolutionParams
) -> float:
    """``1 / (d^2 sqrt(1 - phidot^2 d^2)) + gamma phi^k / k``."""
    root = _lorentz_factor_inverse(phidot, params)
    return 1 / (params.d_squared * root) + params.gamma * phi**params.k / (
        params.k
    )


@dataclass(frozen=True)
class LineTrajectory:
    """Samples of ``phi`` and ``phidot``."""

    t: np.ndarray
    phi: np.ndarray
    phidot: np.ndarray

    def energy_drift(self, params: LineSolutionParams) -> float:
        energies = [
            line_energy(a, b, params) for a, b in zip(self.phi, self.phidot)
        ]
        return float(np.max(np.abs(np.array(energies) - energies[0])))


def integrate_line_solution(
    params: LineSolutionParams,
    phi0: float,
    phidot0: float,
    t_end: float,
    samples: int = 201,
    settings: IntegratorSettings = DEFAULT_INTEGRATOR,
) -> LineTrajectory:
    """Integrates the scalar equation of the straight-line solution.

    Raises:
        SubluminalityError: If the initial speed is not below light speed.
        IntegrationError: If the solver reports a failure.
    """
    _lorentz_factor_inverse(phidot0, params)

    def rhs(_, y):
        return [y[1], line_solution_rhs(y[0], y[1], params)]

    times = np.linspace(0.0, t_end, samples)
    solution = solve_ivp(
        rhs,
        (0.0, t_end),
        [phi0, phidot0],
        method="DOP853",
        t_eval=times,
        rtol=settings.rtol,
        atol=settings.atol,
    )
    if not solution.success:
        logger.error(f"Line solution failed: {solution.message}")
        raise IntegrationError(
            f"Line solution integration failed: {solution.message}"
        )
    return LineTrajectory(solution.t, solution.y[0], solution.y[1])


def embed_line_state(
    phi: float, phidot: float, params: LineSolutionParams
) -> Tuple[np.ndarray, np.ndarray]:
    """``q = phi d`` and ``p = phidot d / sqrt(1 - phidot^2 d^2)``."""
    d = np.array(params.d)
    root = _lorentz_factor_inverse(phidot, params)
    return phi * d, phidot * d / root


def line_embedding_residual(
    V: HomogeneousPotential,
    params: LineSolutionParams,
    trajectory: LineTrajectory,
    settings: IntegratorSettings = DEFAULT_INTEGRATOR,
) -> float:
    """Largest distance between the embedded line solution and the full
    relativistic flow started from the same state."""
    from .dynamics import Kinetic, PhaseState, integrate

    q0, p0 = embed_line_state(
        trajectory.phi[0], trajectory.phidot[0], params
    )
    start = PhaseState.from_qp(trajectory.t[0], q0, p0)
    flow = integrate(
        V,
        Kinetic.RELATIVISTIC,
        start,
        float(trajectory.t[-1]),
        settings=settings,
        t_eval=trajectory.t,
    )
    worst = 0.0
    for state, phi, phidot in zip(
        flow.states, trajectory.phi, trajectory.phidot
    ):
        q, p = embed_line_state(phi, phidot, params)
        worst = max(
            worst,
            float(np.max(np.abs(state.q - q))),
            float(np.max(np.abs(state.p - p))),
        )
    logger.debug(f"Embedding residual {worst:.3e}")
    return worst


def yoshida_variable(phi: float, params: LineSolutionParams) -> float:
    """``z = gamma d^2 phi^k / k``."""
    return params.gamma * params.d_squared * phi**params.k / params.k


@dataclass(frozen=True)
class YoshidaRates:
    """``zdot^2`` and ``zddot`` from the chain rule and from the closed
    forms in ``z`` alone; both pairs agree on the solution."""

    z: float
    zdot_squared: float
    zddot: float
    zdot_squared_closed: float
    zddot_closed: float


def yoshida_rates(
    phi: float, phidot: float, params: LineSolutionParams
) -> YoshidaRates:
    """Derivatives of the Yoshida variable along the line solution.

    The closed forms read
    ``zdot^2 = gamma k phi^(k-2) z ((z-s)^2 - 1) / (z-s)^2`` and
    ``zddot = gamma phi^(k-2) (z + (k-1)(s + (z-s)^3)) / (z-s)^3``.
    """
    k, gamma, s = params.k, params.gamma, params.s
    z = yoshida_variable(phi, params)
    phiddot = line_solution_rhs(phi, phidot, params)
    zdot = gamma * params.d_squared * phi ** (k - 1) * phidot
    zddot = (
        gamma
        * params.d_squared
        * ((k - 1) * phi ** (k - 2) * phidot**2 + phi ** (k - 1) * phiddot)
    )
    shifted = z - s
    return YoshidaRates(
        z=z,
        zdot_squared=zdot**2,
        zddot=zddot,
        zdot_squared_closed=(
            gamma * k * phi ** (k - 2) * z * (shifted**2 - 1) / shifted**2
        ),
        zddot_closed=(
            gamma
            * phi ** (k - 2)
            * (z + (k - 1) * (s + shifted**3))
            / shifted**3
        ),
    )


def _check_regular(z: complex, s: float) -> None:
    for pole in (0.0, s - 1, s + 1):
        if abs(z - pole) <= POLE_DISTANCE:
            raise PoleError(f"z={z} is a singular point (pole at {pole}).")


def variational_coefficient_p(k: int, s: float, z: complex) -> complex:
    """``p(z) = (k-1) / (k z) + (z-s) / ((z-s)^2 - 1)``."""
    _check_regular(z, s)
    w = z - s
    return (k - 1) / (k * z) + w / (w**2 - 1)


def variational_coefficient_q(
    k: int, lam: complex, s: float, z: complex
) -> complex:
    """``q(z) = lam (s - z) / (k z ((z-s)^2 - 1))``."""
    _check_regular(z, s)
    w = z - s
    return lam * (s - z) / (k * z * (w**2 - 1))


def variational_coefficient_r(
    k: int, lam: complex, s: float, z: complex
) -> complex:
    """Coefficient of the reduced equation ``w'' = r(z) w``.

    Raises:
        PoleError: If ``z`` is within ``1e-12`` of ``0``, ``s - 1`` or
            ``s + 1``.
    """
    p = variational_coefficient_p(k, s, z)
    w = z - s
    p_prime = -(k - 1) / (k * z**2) - (w**2 + 1) / (w**2 - 1) ** 2
    return p**2 / 4 + p_prime / 2 - variational_coefficient_q(k, lam, s, z)


@dataclass(frozen=True)
class SingularPointData:
    """Local data of ``r`` at one singular point.

    ``point`` is None for infinity. ``leading`` is the coefficient of the
    double pole (of ``z^-2`` at infinity) and ``difference`` the exponent
    difference ``sqrt(1 + 4 leading)``.
    """

    point: Optional[Fraction]
    leading: Fraction
    difference: complex


def _exact(value: Number) -> sympy.Rational:
    fraction = Fraction(value)
    return sympy.Rational(fraction.numerator, fraction.denominator)


def symbolic_coefficient_r(
    k: int, lam: Number, s: Number, z: sympy.Symbol
) -> sympy.Expr:
    """``r(z)`` as an exact rational function."""
    k_, lam_, s_ = sympy.Integer(k), _exact(lam), _exact(s)
    w = z - s_
    p = (k_ - 1) / (k_ * z) + w / (w**2 - 1)
    q = lam_ * (s_ - z) / (k_ * z * (w**2 - 1))
    return sympy.cancel(p**2 / 4 + sympy.diff(p, z) / 2 - q)


def _difference(leading: sympy.Expr) -> complex:
    return complex(sympy.sqrt(1 + 4 * leading).evalf(30))


def singular_exponent_differences(
    k: int, lam: Number, s: Number
) -> List[SingularPointData]:
    """Exponent differences of ``w'' = r(z) w`` at every singular point.

    Leading coefficients come from exact Laurent data. Finite points are
    ordered ascending and infinity comes last. Points that coincide (for
    ``s = +-1``) are reported once with their merged data.
    """
    if k == 0:
        raise ValueError("Degree k must be non-zero.")
    z = sympy.Symbol("z")
    r = symbolic_coefficient_r(k, lam, s, z)
    s_ = _exact(s)
    points = sorted({sympy.Integer(0), s_ - 1, s_ + 1})

    data = []
    for point in points:
        leading = sympy.cancel((z - point) ** 2 * r).subs(z, point)
        data.append(
            SingularPointData(
                Fraction(int(point.p), int(point.q)),
                Fraction(int(leading.p), int(leading.q)),
                _difference(leading),
            )
        )
    x = sympy.Symbol("x")
    at_infinity = sympy.cancel(r.subs(z, 1 / x) / x**2).subs(x, 0)
    data.append(
        SingularPointData(
            None,
            Fraction(int(at_infinity.p), int(at_infinity.q)),
            _difference(at_infinity),
        )
    )
    logger.debug(f"Exponent data for k={k}, lam={lam}, s={s}: {data}")
    return data


def merged_exponent_differences(
    k: int, lam: Number
) -> Tuple[complex, complex, complex]:
    """``(rho, sigma, tau)`` read off at ``s = 1``, where ``z = s - 1``
    merges with ``z = 0``: ``rho`` at 0, ``sigma`` at 2, ``tau`` at
    infinity."""
    by_point: Dict[Optional[Fraction], complex] = {
        item.point: item.difference
        for item in singular_exponent_differences(k, lam, 1)
    }
    return by_point[Fraction(0)], by_point[Fraction(2)], by_point[None]
