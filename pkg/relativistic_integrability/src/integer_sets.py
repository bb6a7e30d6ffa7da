"""Exact arithmetic for the integer sets J+, J-, J_k and the Pell machinery
behind them.

``f(k, p, +-1) = 3kp(2p+1) + (1 +- (4p+1) sqrt(4k^2 p(2p+1) + 1)) / 2`` is an
integer exactly when the radicand is a perfect square. Writing
``X = k(4p+1)`` and ``mu = +-sqrt(radicand)`` turns that condition into the
conic ``X^2 - 2 mu^2 = k^2 - 2``, whose integer points are walked with the
unit ``3 + 2 sqrt 2``. Floating point is only ever used to decide when a
scan may stop, never to decide membership.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Set, Tuple

import numpy as np

from .errors import PellError

# Logger
logger = logging.getLogger(__name__)

MAX_ENUMERATION_COUNT: int = 10_000
MAX_DENSITY_BOUND: int = 10_000_000
SCAN_PATIENCE: int = 3
INT64_SAFE_RADICAND: int = 2**62

# (x, y) stands for x + y sqrt 2
Surd = Tuple[int, int]
UNIT: Surd = (3, 2)


class SetName(str, Enum):
    """Names of the admissible-eigenvalue sets."""

    J_PLUS = "JPlus"
    J_MINUS = "JMinus"
    J_1 = "J1"
    J_2 = "J2"
    J_MINUS_1 = "Jm1"
    J_MINUS_2 = "Jm2"


@dataclass(frozen=True)
class MembershipWitness:
    """Outcome of a membership test.

    ``witness_p`` reproduces ``value`` through the set's defining formula
    whenever ``member`` is true.
    """

    member: bool
    set_name: SetName
    witness_p: Optional[int]
    value: int


@dataclass(frozen=True)
class FValue:
    """Value of ``f(k, p, sign)``: exact when ``integer`` is set."""

    k: int
    p: int
    sign: int
    integer: Optional[int]
    approximate: float

    @property
    def is_integer(self) -> bool:
        return self.integer is not None


@dataclass(frozen=True)
class PellSolution:
    """``U^2 - D V^2 = 1``."""

    U: int
    V: int
    D: int

    def __post_init__(self):
        if self.U * self.U - self.D * self.V * self.V != 1:
            raise PellError(
                f"({self.U}, {self.V}) does not solve U^2 - {self.D} V^2 = 1"
            )


@dataclass(frozen=True)
class DensityScan:
    """Integer hits of ``f(k, p, +-1)`` for ``|p| <= p_bound``.

    Attributes:
        parameters: Integers ``p`` with a perfect-square radicand.
        parameter_count: ``len(parameters)``.
        hit_count: Number of ``(p, sign)`` pairs with an integer value.
    """

    k: int
    p_bound: int
    parameters: Tuple[int, ...]

    @property
    def parameter_count(self) -> int:
        return len(self.parameters)

    @property
    def hit_count(self) -> int:
        return 2 * len(self.parameters)


@dataclass(frozen=True)
class PellBranch:
    """One recurrence branch of J+ or J-, with the particular solution of
    ``X^2 - 32k^2 Y^2 = 64k^2(k^2 - 2)`` it starts from."""

    set_name: SetName
    x0: int
    y0: int
    first_values: Tuple[int, ...]


def _check_k(k: int) -> None:
    if k == 0:
        raise ValueError("Degree k must be non-zero.")


def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")


def is_perfect_square(value: int) -> bool:
    if value < 0:
        return False
    root = math.isqrt(value)
    return root * root == value


def radicand(k: int, p: int) -> int:
    """``4k^2 p(2p+1) + 1``; at least 1 for every integer ``p``."""
    return 4 * k * k * p * (2 * p + 1) + 1


def f_pm(k: int, p: int, sign: int) -> FValue:
    """Evaluates ``f(k, p, sign)`` in exact arithmetic when possible.

    Args:
        k: Non-zero degree.
        p: Integer parameter.
        sign: +1 for the J+ branch, -1 for J-.

    Returns:
        The exact integer when the radicand is a perfect square, otherwise
        only the double-precision approximation.

    Raises:
        ValueError: If ``k == 0`` or ``sign`` is not +-1.
    """
    _check_k(k)
    _check_sign(sign)
    square = radicand(k, p)
    base = 3 * k * p * (2 * p + 1)
    root = math.isqrt(square)
    if root * root == square:
        # (4p + 1) and root are odd, so the bracket is even
        exact = base + (1 + sign * (4 * p + 1) * root) // 2
        return FValue(k, p, sign, exact, float(exact))
    approximate = base + 0.5 * (1 + sign * (4 * p + 1) * math.sqrt(square))
    return FValue(k, p, sign, None, approximate)


def _scan_order() -> Iterator[int]:
    yield 0
    step = 1
    while True:
        yield step
        yield -step
        step += 1


def in_J_pm(k: int, lam: int) -> MembershipWitness:
    """Tests whether ``lam`` lies in J+ or J- for degree ``k``.

    Scans ``p = 0, 1, -1, 2, ...`` and gives up on a side once both
    branches exceed ``|lam|`` for three consecutive ``p`` on that side.

    Returns:
        The first witness found, or a non-member record naming J+.
    """
    _check_k(k)
    lam = int(lam)
    exceeded = {1: 0, -1: 0}
    for p in _scan_order():
        side = 1 if p >= 0 else -1
        if p != 0 and exceeded[side] >= SCAN_PATIENCE:
            if exceeded[-side] >= SCAN_PATIENCE:
                break
            continue
        values = [f_pm(k, p, sign) for sign in (1, -1)]
        for value in values:
            if value.integer == lam:
                set_name = SetName.J_PLUS if value.sign == 1 else (
                    SetName.J_MINUS
                )
                logger.debug(f"{lam} = f(k={k}, p={p}, {value.sign:+d})")
                return MembershipWitness(True, set_name, p, lam)
        if min(abs(v.approximate) for v in values) > abs(lam):
            if p == 0:
                exceeded[1] += 1
                exceeded[-1] += 1
            else:
                exceeded[side] += 1
        elif p != 0:
            exceeded[side] = 0
    return MembershipWitness(False, SetName.J_PLUS, None, lam)


def _multiply(a: Surd, b: Surd) -> Surd:
    return (a[0] * b[0] + 2 * a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _conjugate_unit(unit: Surd) -> Surd:
    return (unit[0], -unit[1])


def _fundamental_points(norm: int) -> List[Surd]:
    """Points of ``x^2 - 2y^2 = norm`` inside the fundamental region, with
    every sign combination."""
    points: Set[Surd] = set()
    for y in range(0, math.isqrt(abs(norm)) + 2):
        square = norm + 2 * y * y
        if is_perfect_square(square):
            x = math.isqrt(square)
            for sx in (1, -1):
                for sy in (1, -1):
                    points.add((sx * x, sy * y))
    return sorted(points)


def _orbit_within(seed: Surd, unit: Surd, bound: int) -> Iterator[Surd]:
    """Walks ``seed * unit^j`` in one direction until ``|x|`` exceeds
    ``bound`` while growing."""
    current = seed
    previous_size = abs(current[0])
    while True:
        current = _multiply(current, unit)
        size = abs(current[0])
        if size > bound and size > previous_size:
            return
        if size <= bound:
            yield current
        previous_size = size


def conic_points(k: int, bound: int) -> Set[Surd]:
    """Every integer point ``(X, mu)`` of ``X^2 - 2mu^2 = k^2 - 2`` with
    ``|X| <= bound``."""
    points: Set[Surd] = set()
    for seed in _fundamental_points(k * k - 2):
        if abs(seed[0]) <= bound:
            points.add(seed)
        for unit in (UNIT, _conjugate_unit(UNIT)):
            points.update(_orbit_within(seed, unit, bound))
    return points


def _canonical(k: int, point: Surd) -> Optional[Surd]:
    """Maps a conic point to ``X = k(4p+1)`` form, or None."""
    modulus = 4 * abs(k)
    x, mu = point
    if x % modulus == k % modulus:
        return point
    if (-x) % modulus == k % modulus:
        return (-x, -mu)
    return None


def _lambda_from_point(k: int, point: Surd) -> int:
    x, mu = point
    numerator = 3 * (x * x - k * k) + 4 * k + 4 * x * mu
    value, remainder = divmod(numerator, 8 * k)
    if remainder:
        raise PellError(f"{point} is not an integer point of the k={k} conic")
    return value


def _lower_bound(k: int, x_bound: int) -> float:
    """``|lambda|`` lower bound over conic points with ``|X| > x_bound``."""
    n = abs(k * k - 2)
    x = float(x_bound)
    return (
        (3 - 2 * math.sqrt(2)) * x * x
        - 2 * math.sqrt(2) * x * math.sqrt(n)
        - 3 * k * k
        - 4 * abs(k)
    ) / (8 * abs(k))


def _order_key(value: int) -> Tuple[int, int]:
    return (abs(value), value)


def _check_count(count: int) -> None:
    if not 1 <= count <= MAX_ENUMERATION_COUNT:
        raise ValueError(
            f"count must be in [1, {MAX_ENUMERATION_COUNT}], got {count}"
        )


def enumerate_J_pm(k: int, count: int) -> List[int]:
    """The ``count`` elements of J+ union J- of least absolute value.

    Every integer ``p`` with a perfect-square radicand is enumerated
    exactly through the integer points of the associated conic, so the
    result does not depend on how far a ``p``-scan could reach.

    Returns:
        Elements in increasing order.
    """
    _check_k(k)
    _check_count(count)
    bound = 16 * abs(k) + 16
    while True:
        values: Set[int] = set()
        for point in conic_points(k, bound):
            canonical = _canonical(k, point)
            if canonical is not None:
                values.add(_lambda_from_point(k, canonical))
        smallest = sorted(values, key=_order_key)[:count]
        if len(smallest) == count and abs(smallest[-1]) < _lower_bound(
            k, bound
        ):
            logger.debug(f"J(k={k}) enumerated with |X| <= {bound}")
            return sorted(smallest)
        bound = bound * bound


def square_parameters(k: int, p_values: np.ndarray) -> List[int]:
    """Parameters among ``p_values`` with a perfect-square radicand."""
    _check_k(k)
    if p_values.size == 0:
        return []
    largest = int(np.max(np.abs(p_values)))
    if radicand(k, largest) < INT64_SAFE_RADICAND:
        p = p_values.astype(np.int64)
        squares = 4 * k * k * p * (2 * p + 1) + 1
        roots = np.floor(np.sqrt(squares.astype(float))).astype(np.int64)
        hit = np.zeros(p.shape, dtype=bool)
        for shift in (-1, 0, 1):
            candidate = roots + shift
            hit |= candidate * candidate == squares
        return [int(x) for x in p[hit]]
    return [int(p) for p in p_values if is_perfect_square(radicand(k, int(p)))]


def _scan_chunk(args: Tuple[int, int, int]) -> List[int]:
    k, start, stop = args
    return square_parameters(k, np.arange(start, stop, dtype=np.int64))


def integer_density_scan(
    k: int, p_bound: int, workers: int = 1, chunk_size: int = 250_000
) -> DensityScan:
    """Counts the integer values of ``f(k, p, +-1)`` over ``|p| <= p_bound``.

    The range is split into chunks that may be scanned in worker processes;
    chunk results are concatenated in range order.

    Raises:
        ValueError: If ``p_bound`` is negative or above 10^7.
    """
    _check_k(k)
    if not 0 <= p_bound <= MAX_DENSITY_BOUND:
        raise ValueError(
            f"p_bound must be in [0, {MAX_DENSITY_BOUND}], got {p_bound}"
        )
    chunks = [
        (k, start, min(start + chunk_size, p_bound + 1))
        for start in range(-p_bound, p_bound + 1, chunk_size)
    ]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_scan_chunk, chunks))
    else:
        results = [_scan_chunk(chunk) for chunk in chunks]
    parameters = tuple(p for chunk in results for p in chunk)
    logger.info(
        f"k={k}, |p| <= {p_bound}: {len(parameters)} parameter(s) give "
        "integer values"
    )
    return DensityScan(k=k, p_bound=p_bound, parameters=parameters)


def triangular_membership(t: int) -> bool:
    """``t = p(p+1)/2`` for some integer ``p``."""
    return t >= 0 and is_perfect_square(8 * t + 1)


def triangular_index(t: int) -> Optional[int]:
    """The ``p >= 0`` with ``p(p+1)/2 = t``, or None."""
    if not triangular_membership(t):
        return None
    return (math.isqrt(8 * t + 1) - 1) // 2


def square_triangular_membership(s: int) -> bool:
    """``s`` is both a perfect square and triangular."""
    return is_perfect_square(s) and triangular_membership(s)


def in_J_k_small(k: int, lam: int) -> MembershipWitness:
    """Membership in the extra set ``J_k`` of ``|k| <= 2``.

    ``J_1`` holds the square triangular numbers, ``J_2`` the triangular
    numbers, and ``J_-1``, ``J_-2`` the values ``1 - s`` for ``s`` in
    ``J_1``, ``J_2``. The witness is the triangular index of the tested
    number.

    Raises:
        ValueError: If ``k`` is not one of -2, -1, 1, 2.
    """
    lam = int(lam)
    rules = {
        1: (SetName.J_1, lam, square_triangular_membership),
        2: (SetName.J_2, lam, triangular_membership),
        -1: (SetName.J_MINUS_1, 1 - lam, square_triangular_membership),
        -2: (SetName.J_MINUS_2, 1 - lam, triangular_membership),
    }
    if k not in rules:
        raise ValueError(f"J_k is only defined for |k| <= 2, got k={k}")
    set_name, tested, rule = rules[k]
    if rule(tested):
        return MembershipWitness(True, set_name, triangular_index(tested), lam)
    return MembershipWitness(False, set_name, None, lam)


def pell_fundamental(D: int) -> PellSolution:
    """Minimal positive solution of ``U^2 - D V^2 = 1``.

    Walks the convergents of the periodic continued fraction of
    ``sqrt(D)``.

    Raises:
        PellError: If ``D`` is not a positive non-square.
    """
    if D <= 0 or is_perfect_square(D):
        raise PellError(f"D must be a positive non-square, got {D}")
    a0 = math.isqrt(D)
    m, d, a = 0, 1, a0
    h_prev, h_curr = 1, a0
    k_prev, k_curr = 0, 1
    while h_curr * h_curr - D * k_curr * k_curr != 1:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        h_prev, h_curr = h_curr, a * h_curr + h_prev
        k_prev, k_curr = k_curr, a * k_curr + k_prev
    return PellSolution(U=h_curr, V=k_curr, D=D)


def recurrence_coefficient(k: int) -> int:
    """``a = 4 U1^2 - 1`` with ``(U1, V1)`` fundamental for ``D = 32k^2``."""
    _check_k(k)
    return 4 * pell_fundamental(32 * k * k).U ** 2 - 1


def _branch_unit(k: int) -> Surd:
    solution = pell_fundamental(32 * k * k)
    return (solution.U, 4 * abs(k) * solution.V)


def _branch_starts(k: int, unit: Surd) -> List[Surd]:
    """Canonical conic points covering one period of every branch."""
    norm = abs(k * k - 2)
    bound = math.isqrt(norm * 2 * unit[0]) + 1
    starts: Set[Surd] = set()
    for point in conic_points(k, bound):
        canonical = _canonical(k, point)
        if canonical is not None:
            starts.add(canonical)
    return sorted(starts)


def _walk_branch(
    seeds: Tuple[int, int, int], a: int, threshold: int, forward: bool
) -> List[int]:
    """Iterates the three-term recurrence from three seeds until ``|value|``
    passes ``threshold`` while growing."""
    # the characteristic polynomial is self-reciprocal, so walking
    # backwards is the same recurrence on the reversed window
    window = list(seeds) if forward else list(reversed(seeds))
    produced: List[int] = []
    while True:
        nxt = a * (window[-1] - window[-2]) + window[-3]
        if abs(nxt) > threshold and abs(nxt) > abs(window[-1]):
            return produced
        produced.append(nxt)
        window = window[1:] + [nxt]


def enumerate_J_pm_via_pell(k: int, count: int) -> List[int]:
    """The same elements as :func:`enumerate_J_pm`, produced by the
    recurrence ``l(n+3) = a (l(n+2) - l(n+1)) + l(n)``.

    Each branch is seeded with three directly computed consecutive
    elements and extended in both directions.
    """
    _check_k(k)
    _check_count(count)
    unit = _branch_unit(k)
    a = recurrence_coefficient(k)
    inverse = _conjugate_unit(unit)
    branches = []
    for start in _branch_starts(k, unit):
        chain = [_multiply(start, inverse), start, _multiply(start, unit)]
        seeds = tuple(
            _lambda_from_point(k, _canonical(k, point)) for point in chain
        )
        branches.append(seeds)

    threshold = max(abs(v) for seeds in branches for v in seeds)
    while True:
        values: Set[int] = set()
        for seeds in branches:
            values.update(seeds)
            values.update(_walk_branch(seeds, a, threshold, forward=True))
            values.update(_walk_branch(seeds, a, threshold, forward=False))
        within = sorted(
            (v for v in values if abs(v) <= threshold), key=_order_key
        )
        if len(within) >= count:
            return sorted(within[:count])
        threshold = max(threshold, 1000) ** 2


def pell_branch_report(k: int, length: int = 4) -> List[PellBranch]:
    """Observed correspondence between particular solutions of the general
    Pell equation and the J+/J- branches they generate."""
    _check_k(k)
    unit = _branch_unit(k)
    report = []
    for start in _branch_starts(k, unit):
        x, mu = start
        values = []
        point = start
        for _ in range(length):
            values.append(_lambda_from_point(k, _canonical(k, point)))
            point = _multiply(point, unit)
        x0, y0 = 8 * k * x, 2 * mu
        if x0 * x0 - 32 * k * k * y0 * y0 != 64 * k * k * (k * k - 2):
            raise PellError(f"({x0}, {y0}) does not solve the k={k} equation")
        report.append(
            PellBranch(
                set_name=SetName.J_PLUS if mu > 0 else SetName.J_MINUS,
                x0=x0,
                y0=y0,
                first_values=tuple(values),
            )
        )
    return report


def membership_table(k: int, values: List[int]) -> Dict[int, bool]:
    """``{value: value in J+ union J-}`` for a batch of integers."""
    return {value: in_J_pm(k, value).member for value in values}
