"""Relativistic and classical Hamiltonian flows of a potential.

The relativistic system is integrated in its extended form: the state is
``y = (q, p, u)`` with ``u`` carried as an extra variable whose Casimir
``u^2 - |p|^2`` stays equal to one along every exact trajectory, so its
drift is a direct measure of integrator quality.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import DOP853
from scipy.optimize import brentq, root
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from .algebra import Polynomial, RadialPotential
from .errors import (DivergenceError, EnergyMismatchError, IntegrationError,
                     MaxStepsExceededError, NonFiniteStateError, PoleError,
                     PotentialError, StepSizeUnderflowError)
from .settings import (DEFAULT_INTEGRATOR, DEFAULT_SECTION, DEFAULT_SEED_GRID,
                       IntegratorSettings, SectionSettings, SeedGrid)

# Logger
logger = logging.getLogger(__name__)

Potential = Union[Polynomial, RadialPotential]
BISECTION_LIMIT: int = 200
REGION_SAMPLES: int = 4000
REGION_MAX_HALF_WIDTH: float = 1e3


class Kinetic(str, Enum):
    """Kinetic energy of the Hamiltonian."""

    RELATIVISTIC = "Relativistic"
    CLASSICAL = "Classical"

    @property
    def minimum_energy(self) -> float:
        """Kinetic energy at rest."""
        return 1.0 if self is Kinetic.RELATIVISTIC else 0.0


@dataclass(eq=False)
class PhaseState:
    """Point of the extended phase space at time ``t``."""

    t: float
    q: np.ndarray
    p: np.ndarray
    u: float

    @classmethod
    def from_qp(cls, t: float, q, p) -> "PhaseState":
        """State with ``u = sqrt(1 + |p|^2)``."""
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        return cls(float(t), q, p, float(np.sqrt(1.0 + p @ p)))

    @classmethod
    def from_vector(cls, t: float, y: np.ndarray) -> "PhaseState":
        n = (len(y) - 1) // 2
        return cls(float(t), y[:n].copy(), y[n:2 * n].copy(), float(y[-1]))

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.q, self.p, [self.u]])

    @property
    def casimir(self) -> float:
        return self.u**2 - float(self.p @ self.p)


def _check_finite(y: np.ndarray) -> None:
    if not np.all(np.isfinite(y)):
        raise NonFiniteStateError(f"State is not finite: {y}")


@dataclass(frozen=True)
class HamiltonianSystem:
    """``H = K(p) + V(q)`` with relativistic or classical ``K``."""

    V: Potential
    kinetic: Kinetic

    def __post_init__(self):
        if isinstance(self.V, Polynomial) and not self.V.is_real:
            raise PotentialError("Dynamics needs a real potential.")

    @property
    def n(self) -> int:
        return self.V.n

    def force(self, q: np.ndarray) -> np.ndarray:
        return -np.real(self.V.gradient(q))

    def rhs(self, _t: float, y: np.ndarray) -> np.ndarray:
        """Vector field of the extended system in ``y = (q, p, u)``."""
        n = self.n
        q, p, u = y[:n], y[n:2 * n], y[-1]
        force = self.force(q)
        velocity = p / u if self.kinetic is Kinetic.RELATIVISTIC else p
        return np.concatenate([velocity, force, [float(p @ force) / u]])

    def kinetic_energy(self, p: np.ndarray) -> float:
        p_squared = float(p @ p)
        if self.kinetic is Kinetic.RELATIVISTIC:
            return float(np.sqrt(1.0 + p_squared))
        return 0.5 * p_squared

    def energy(self, q, p) -> float:
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        return self.kinetic_energy(p) + float(np.real(self.V.value(q)))

    def state_energy(self, state: PhaseState) -> float:
        return self.energy(state.q, state.p)

    def jacobian(self, q, p) -> np.ndarray:
        """Jacobian of ``(qdot, pdot)`` with respect to ``(q, p)``."""
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        n = self.n
        if self.kinetic is Kinetic.RELATIVISTIC:
            u = np.sqrt(1.0 + p @ p)
            velocity_block = (np.eye(n) - np.outer(p, p) / u**2) / u
        else:
            velocity_block = np.eye(n)
        jacobian = np.zeros((2 * n, 2 * n))
        jacobian[:n, n:] = velocity_block
        jacobian[n:, :n] = -np.real(self.V.hessian(q))
        return jacobian


def relativistic_rhs(state: PhaseState, V: Potential) -> np.ndarray:
    """``qdot = p / u``, ``pdot = -V'(q)``, ``udot = -(p . V'(q)) / u``.

    Raises:
        NonFiniteStateError: If the state holds a NaN or infinity.
    """
    y = state.vector
    _check_finite(y)
    return HamiltonianSystem(V, Kinetic.RELATIVISTIC).rhs(state.t, y)


def classical_rhs(state: PhaseState, V: Potential) -> np.ndarray:
    """``qdot = p``, ``pdot = -V'(q)``; ``u`` is carried as above."""
    y = state.vector
    _check_finite(y)
    return HamiltonianSystem(V, Kinetic.CLASSICAL).rhs(state.t, y)


def angular_momentum(q, p) -> float:
    """``L = q1 p2 - q2 p1``."""
    return float(q[0] * p[1] - q[1] * p[0])


@dataclass(frozen=True)
class _Step:
    t_old: float
    t_new: float
    y_old: np.ndarray
    y_new: np.ndarray
    dense: Callable[[float], np.ndarray]


def _steps(
    system: HamiltonianSystem,
    state0: PhaseState,
    t_end: float,
    settings: IntegratorSettings,
) -> Iterator[_Step]:
    y0 = state0.vector
    _check_finite(y0)
    if t_end == state0.t:
        raise ValueError("t_end must differ from the initial time.")
    options = {"rtol": settings.rtol, "atol": settings.atol}
    if settings.first_step is not None:
        options["first_step"] = settings.first_step
    solver = DOP853(system.rhs, state0.t, y0, t_end, **options)

    steps = 0
    while solver.status == "running":
        t_old, y_old = solver.t, solver.y.copy()
        message = solver.step()
        if solver.status == "failed":
            raise StepSizeUnderflowError(
                f"Integrator failed at t={solver.t}: {message}"
            )
        steps += 1
        if steps > settings.max_steps:
            raise MaxStepsExceededError(
                f"Exceeded {settings.max_steps} steps before t={t_end}"
            )
        y_new = solver.y
        _check_finite(y_new)
        if np.max(np.abs(y_new)) > settings.divergence_radius:
            raise DivergenceError(
                f"|y| exceeded {settings.divergence_radius} at t={solver.t}"
            )
        yield _Step(
            t_old, solver.t, y_old, y_new.copy(), solver.dense_output()
        )


@dataclass
class Trajectory:
    """Samples of one orbit and the drift of its conserved quantities."""

    states: List[PhaseState]
    energy_drift: float
    casimir_drift: float
    steps: int

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])


def integrate(
    V: Potential,
    kinetic: Kinetic,
    state0: PhaseState,
    t_end: float,
    settings: IntegratorSettings = DEFAULT_INTEGRATOR,
    t_eval: Optional[Sequence[float]] = None,
) -> Trajectory:
    """Integrates one orbit with the adaptive DOP853 Runge-Kutta scheme.

    Args:
        V: Real potential.
        kinetic: Relativistic or classical kinetic energy.
        state0: Initial state; ``t_end`` may precede ``state0.t``.
        t_end: Final time.
        settings: Tolerances and step budget.
        t_eval: Times at which states are sampled from the dense output.
            Every accepted step is recorded when unset.

    Returns:
        The sampled trajectory. Drifts are measured on every accepted step.

    Raises:
        StepSizeUnderflowError: If the step size collapses.
        MaxStepsExceededError: If the step budget is exhausted.
        DivergenceError: If the state leaves the divergence radius.
        NonFiniteStateError: If a NaN or infinity appears.
    """
    system = HamiltonianSystem(V, kinetic)
    energy0 = system.state_energy(state0)
    direction = np.sign(t_end - state0.t)
    pending = None if t_eval is None else np.asarray(t_eval, dtype=float)

    states: List[PhaseState] = []
    if pending is None or (pending.size and pending[0] == state0.t):
        states.append(state0)
    energy_drift = 0.0
    casimir_drift = abs(state0.casimir - 1.0)
    steps = 0
    for step in _steps(system, state0, t_end, settings):
        steps += 1
        end = PhaseState.from_vector(step.t_new, step.y_new)
        energy_drift = max(
            energy_drift, abs(system.state_energy(end) - energy0)
        )
        casimir_drift = max(casimir_drift, abs(end.casimir - 1.0))
        if pending is None:
            states.append(end)
            continue
        inside = ((pending - step.t_old) * direction > 0) & (
            (pending - step.t_new) * direction <= 0
        )
        for t in pending[inside]:
            states.append(PhaseState.from_vector(t, step.dense(t)))
    logger.debug(
        f"Integrated to t={t_end} in {steps} steps; energy drift "
        f"{energy_drift:.3e}, Casimir drift {casimir_drift:.3e}"
    )
    return Trajectory(states, energy_drift, casimir_drift, steps)


@dataclass(frozen=True)
class ConservationAudit:
    """Largest deviation of each first integral along a trajectory."""

    energy_drift: float
    casimir_drift: float
    angular_momentum_drift: Optional[float]
    momentum_drift: Tuple[float, ...]


def conservation_audit(
    V: Potential, kinetic: Kinetic, trajectory: Trajectory
) -> ConservationAudit:
    """Drifts of H, the Casimir, ``L`` (planar systems) and each ``p_i``
    over the sampled states."""
    system = HamiltonianSystem(V, kinetic)
    first = trajectory.states[0]
    energies = np.array([system.state_energy(s) for s in trajectory.states])
    casimirs = np.array([s.casimir for s in trajectory.states])
    momenta = np.array([s.p for s in trajectory.states])
    angular = None
    if system.n == 2:
        values = np.array(
            [angular_momentum(s.q, s.p) for s in trajectory.states]
        )
        angular = float(np.max(np.abs(values - values[0])))
    return ConservationAudit(
        energy_drift=max(
            trajectory.energy_drift,
            float(np.max(np.abs(energies - energies[0]))),
        ),
        casimir_drift=max(
            trajectory.casimir_drift, float(np.max(np.abs(casimirs - 1.0)))
        ),
        angular_momentum_drift=angular,
        momentum_drift=tuple(
            float(x) for x in np.max(np.abs(momenta - first.p), axis=0)
        ),
    )


class OrbitStatus(str, Enum):
    COMPLETED = "Completed"
    DIVERGED = "Diverged"
    ENERGY_DRIFT = "EnergyDrift"
    FAILED = "Failed"


@dataclass(frozen=True)
class SectionPoint:
    """Refined crossing of the section plane.

    ``coords`` holds the coordinate and momentum of the remaining degree of
    freedom, ``(q2, p2)`` for the plane ``q1 = 0``.
    """

    t: float
    coords: Tuple[float, float]
    energy: float
    crossing_index: int
    casimir_drift: float


@dataclass
class OrbitSection:
    """Section points of one orbit, in crossing order."""

    orbit_id: int
    points: List[SectionPoint] = field(default_factory=list)
    status: OrbitStatus = OrbitStatus.COMPLETED
    energy_drift: float = 0.0
    casimir_drift: float = 0.0
    message: str = ""

    @property
    def coordinates(self) -> np.ndarray:
        return np.array([p.coords for p in self.points]).reshape(-1, 2)


def _refine_crossing(
    system: HamiltonianSystem,
    step: _Step,
    plane_index: int,
    tolerance: float,
) -> Tuple[float, np.ndarray]:
    low, high = step.t_old, step.t_new
    g_low = step.y_old[plane_index]
    t, y = high, step.y_new
    for _ in range(BISECTION_LIMIT):
        if abs(y[plane_index]) <= tolerance:
            break
        t = 0.5 * (low + high)
        y = step.dense(t)
        if np.sign(y[plane_index]) == np.sign(g_low):
            low, g_low = t, y[plane_index]
        else:
            high = t
    rate = system.rhs(t, y)[plane_index]
    if rate != 0:
        t -= y[plane_index] / rate
        y = step.dense(t)
    return t, y


def _orbit_section(
    system: HamiltonianSystem,
    orbit_id: int,
    state0: PhaseState,
    t_end: float,
    section: SectionSettings,
    integrator: IntegratorSettings,
) -> OrbitSection:
    plane, momentum = section.plane_index, system.n + section.momentum_index
    other = 1 - section.plane_index
    energy0 = system.state_energy(state0)
    orbit = OrbitSection(orbit_id=orbit_id)
    try:
        for step in _steps(system, state0, t_end, integrator):
            end = PhaseState.from_vector(step.t_new, step.y_new)
            orbit.energy_drift = max(
                orbit.energy_drift, abs(system.state_energy(end) - energy0)
            )
            orbit.casimir_drift = max(
                orbit.casimir_drift, abs(end.casimir - 1.0)
            )
            g_old, g_new = step.y_old[plane], step.y_new[plane]
            if g_old == 0 or g_old * g_new > 0:
                continue
            t, y = _refine_crossing(
                system, step, plane, section.crossing_tolerance
            )
            if y[momentum] <= 0:
                continue
            crossing = PhaseState.from_vector(t, y)
            orbit.points.append(
                SectionPoint(
                    t=t,
                    coords=(float(y[other]), float(y[system.n + other])),
                    energy=system.state_energy(crossing),
                    crossing_index=len(orbit.points),
                    casimir_drift=abs(crossing.casimir - 1.0),
                )
            )
    except DivergenceError as e:
        orbit.status, orbit.message = OrbitStatus.DIVERGED, str(e)
    except IntegrationError as e:
        orbit.status, orbit.message = OrbitStatus.FAILED, str(e)
    if (
        orbit.status is OrbitStatus.COMPLETED
        and orbit.energy_drift > section.energy_drift_limit
    ):
        orbit.status = OrbitStatus.ENERGY_DRIFT
        orbit.message = (
            f"energy drift {orbit.energy_drift:.3e} exceeds "
            f"{section.energy_drift_limit:.1e}"
        )
    if orbit.status is not OrbitStatus.COMPLETED:
        logger.warning(
            f"Orbit {orbit_id}: {orbit.status.value}; {orbit.message}"
        )
    logger.debug(f"Orbit {orbit_id}: {len(orbit.points)} crossing(s)")
    return orbit


def _section_worker(args) -> OrbitSection:
    return _orbit_section(*args)


def poincare_section(
    V: Potential,
    kinetic: Kinetic,
    initial_states: Sequence[PhaseState],
    t_end: float,
    energy: float,
    section: SectionSettings = DEFAULT_SECTION,
    integrator: IntegratorSettings = DEFAULT_INTEGRATOR,
    workers: int = 1,
) -> List[OrbitSection]:
    """Crossings of every orbit with the plane ``q[plane_index] = 0`` in
    the direction ``p[momentum_index] > 0``.

    Each crossing is located by a sign change of ``q[plane_index]`` between
    accepted steps, bisection on the dense output down to
    ``crossing_tolerance`` and one Newton step. Orbits are independent and
    may run in parallel; the result is ordered as ``initial_states``.

    Raises:
        EnergyMismatchError: If an initial state is off ``energy`` by more
            than ``section.energy_check``.
    """
    system = HamiltonianSystem(V, kinetic)
    if V.n != 2:
        raise PotentialError(f"Sections need n=2, got n={V.n}")
    for index, state in enumerate(initial_states):
        offset = system.state_energy(state) - energy
        if abs(offset) > section.energy_check:
            raise EnergyMismatchError(
                f"Initial state {index} has energy off by {offset:.3e} "
                f"from E={energy}"
            )
    jobs = [
        (system, index, state, t_end, section, integrator)
        for index, state in enumerate(initial_states)
    ]
    logger.info(
        f"Computing sections of {len(jobs)} orbit(s) with {workers} worker(s)"
    )
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(_section_worker, jobs))
    return [_section_worker(job) for job in jobs]


def _momentum_squared(
    system: HamiltonianSystem, energy: float, q, p_fixed: float
) -> float:
    """``p1^2`` left by the energy at ``q`` once ``p2`` is fixed."""
    try:
        available = energy - float(np.real(system.V.value(q)))
    except PoleError:
        return np.nan
    if system.kinetic is Kinetic.RELATIVISTIC:
        if available <= 0:
            return -1.0
        return available**2 - 1.0 - p_fixed**2
    return 2.0 * available - p_fixed**2


def allowed_interval(
    V: Potential,
    kinetic: Kinetic,
    energy: float,
    p2: float = 0.0,
) -> Tuple[float, float]:
    """Widest interval of ``q2`` on the plane ``q1 = 0`` where a
    non-negative ``p1^2`` remains.

    Raises:
        EnergyMismatchError: If no point of the plane is accessible.
    """
    system = HamiltonianSystem(V, kinetic)

    def radicand(q2: float) -> float:
        return _momentum_squared(system, energy, np.array([0.0, q2]), p2)

    singular_origin = isinstance(V, RadialPotential) and V.k < 2
    half_width = 1.0
    while True:
        grid = np.linspace(-half_width, half_width, REGION_SAMPLES)
        allowed = np.array([radicand(x) for x in grid]) >= 0
        if singular_origin:
            allowed &= np.abs(grid) >= grid[1] - grid[0]
        runs = []
        start = None
        for index, flag in enumerate(allowed):
            if flag and start is None:
                start = index
            if not flag and start is not None:
                runs.append((start, index - 1))
                start = None
        if start is not None:
            runs.append((start, len(grid) - 1))
        if not runs:
            raise EnergyMismatchError(
                f"No accessible point on q1=0 at E={energy}"
            )
        first, last = max(runs, key=lambda r: grid[r[1]] - grid[r[0]])
        touches_edge = first == 0 or last == len(grid) - 1
        if not touches_edge or half_width >= REGION_MAX_HALF_WIDTH:
            break
        half_width *= 4

    def edge(inside: int, outside: int) -> float:
        if outside < 0 or outside >= len(grid):
            return float(grid[inside])
        if not radicand(grid[outside]) < 0:
            # run cut at the singular origin
            return float(grid[inside])
        return float(brentq(radicand, grid[outside], grid[inside]))

    return edge(first, first - 1), edge(last, last + 1)


def seed_section_states(
    V: Potential,
    kinetic: Kinetic,
    energy: float,
    grid: SeedGrid = DEFAULT_SEED_GRID,
) -> List[PhaseState]:
    """Initial states on ``q1 = 0`` with ``p2`` fixed and ``p1 > 0`` solved
    from the energy, spread evenly over the ``q2`` interval."""
    system = HamiltonianSystem(V, kinetic)
    if grid.q2_range is not None:
        low, high = grid.q2_range
    else:
        low, high = allowed_interval(V, kinetic, energy, grid.p2)
    width = high - low
    positions = np.linspace(
        low + grid.margin * width, high - grid.margin * width, grid.orbits
    )
    states = []
    for q2 in positions:
        q = np.array([0.0, q2])
        p1_squared = _momentum_squared(system, energy, q, grid.p2)
        if not p1_squared >= 0:
            raise EnergyMismatchError(
                f"q2={q2} is not accessible at E={energy}"
            )
        states.append(
            PhaseState.from_qp(0.0, q, [np.sqrt(p1_squared), grid.p2])
        )
    logger.info(
        f"Seeded {len(states)} orbit(s) on q2 in [{low:.6g}, {high:.6g}]"
    )
    return states


def find_equilibria(
    system: HamiltonianSystem,
    candidates: Sequence[Sequence[float]],
    tolerance: float = 1e-10,
) -> List[np.ndarray]:
    """Equilibria ``(q, p = 0)`` with ``V'(q) = 0``, polished by Newton's
    method from the supplied candidate positions. Relativistic and
    classical flows share them."""
    found: List[np.ndarray] = []
    for candidate in candidates:
        result = root(
            system.force,
            np.asarray(candidate, dtype=float),
            jac=lambda q: -np.real(system.V.hessian(q)),
        )
        q = result.x
        if np.max(np.abs(system.force(q))) > tolerance:
            logger.debug(f"No equilibrium near {candidate}")
            continue
        if not any(np.allclose(q, other, atol=1e-8) for other in found):
            found.append(q)
    return found


def section_dispersion(points: np.ndarray) -> float:
    """Largest chord between consecutive points ordered by angle around
    their centroid, divided by the diameter of the point set.

    Small for points on a closed star-shaped curve, large for points that
    fill an area.
    """
    points = np.asarray(points, dtype=float)
    if len(points) < 3:
        return 0.0
    centred = points - points.mean(axis=0)
    order = np.argsort(np.arctan2(centred[:, 1], centred[:, 0]))
    ring = centred[order]
    chords = np.linalg.norm(np.roll(ring, -1, axis=0) - ring, axis=1)
    try:
        extreme = centred[ConvexHull(centred).vertices]
    except QhullError:
        extreme = centred
    diameter = float(np.max(pdist(extreme)))
    if diameter == 0:
        return 0.0
    return float(np.max(chords) / diameter)


def section_hull_area(points: np.ndarray) -> float:
    """Area of the convex hull of the section points."""
    points = np.asarray(points, dtype=float)
    if len(points) < 3:
        return 0.0
    try:
        return float(ConvexHull(points).volume)
    except QhullError:
        return 0.0
