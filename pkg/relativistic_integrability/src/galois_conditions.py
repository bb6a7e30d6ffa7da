"""Eigenvalue tables and the verdict built on them.

Every table row is a quadratic ``a p^2 + b p + c`` in an integer parameter
``p``; membership is decided by solving the quadratic over the rationals,
never in floating point. The relativistic verdict requires every
non-trivial eigenvalue to be an integer of ``J+ u J-`` (or of ``J_k`` when
``|k| <= 2``); the classical verdict, reported alongside, only needs a hit
in the classical table.
"""

import cmath
import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .algebra import reconstruct_rational
from .darboux import SpectrumReport
from .integer_sets import (MembershipWitness, in_J_k_small, in_J_pm,
                           is_perfect_square)
from .settings import DEFAULT_TOLERANCES, Tolerances

# Logger
logger = logging.getLogger(__name__)

Number = Union[int, float, complex, Fraction]
GENERIC_TABLE_MAX_K: int = 6


class Table(str, Enum):
    """Which eigenvalue table produced a hit."""

    THM2 = "Thm2"
    GENERIC_LEVEL = "GenericLevel"
    SPECIAL_LEVEL = "SpecialLevel"
    COMBINED_LEVEL = "CombinedLevel"


class Verdict(str, Enum):
    """Outcome of a necessary-conditions test."""

    CANNOT_BE_INTEGRABLE = "CannotBeIntegrable"
    PASSES_NECESSARY_CONDITIONS = "PassesNecessaryConditions"


@dataclass(frozen=True)
class FamilyHit:
    """``lam`` equals row ``row_id`` evaluated at ``parameter_p``.

    ``parameter_p`` is None for rows that accept any ``lam``.
    """

    table: Table
    row_id: str
    parameter_p: Optional[int]
    k: int
    lam: Fraction


@dataclass(frozen=True)
class QuadraticRow:
    """Row ``lam = a p^2 + b p + c``."""

    row_id: str
    a: Fraction
    b: Fraction
    c: Fraction

    def evaluate(self, p: int) -> Fraction:
        return self.a * p * p + self.b * p + self.c

    def solve(self, lam: Fraction) -> List[int]:
        """Integer ``p`` with ``evaluate(p) == lam``, ascending."""
        a, b, c = self.a, self.b, self.c - lam
        if a == 0:
            if b == 0:
                return [0] if c == 0 else []
            root = -c / b
            return [int(root)] if root.denominator == 1 else []
        discriminant = b * b - 4 * a * c
        if discriminant < 0:
            return []
        numerator = discriminant.numerator
        denominator = discriminant.denominator
        if not (is_perfect_square(numerator)
                and is_perfect_square(denominator)):
            return []
        root = Fraction(math.isqrt(numerator), math.isqrt(denominator))
        solutions = {(-b + root) / (2 * a), (-b - root) / (2 * a)}
        return sorted(int(s) for s in solutions if s.denominator == 1)


def _product_row(
    row_id: str,
    scale: Fraction,
    first: Tuple[int, int],
    second: Tuple[int, int],
) -> QuadraticRow:
    """Row ``scale * (u1 p + v1)(u2 p + v2)``."""
    (u1, v1), (u2, v2) = first, second
    return QuadraticRow(
        row_id,
        scale * u1 * u2,
        scale * (u1 * v2 + u2 * v1),
        scale * v1 * v2,
    )


def _square_row(row_id: str, a: Fraction, c: Fraction) -> QuadraticRow:
    return QuadraticRow(row_id, Fraction(a), Fraction(0), Fraction(c))


F = Fraction

# classical rows that only exist for a single k
_THM2_SPECIAL_ROWS = {
    3: [
        (F(1, 8), (2, 1), (6, 1)),
        (F(1, 96), (12, 1), (12, 5)),
        (F(1, 600), (30, 1), (30, 11)),
        (F(1, 600), (30, 7), (30, 17)),
    ],
    4: [(F(1, 72), (12, 1), (12, 7))],
    5: [
        (F(1, 360), (30, 1), (30, 19)),
        (F(1, 40), (10, 1), (10, 7)),
    ],
    -3: [
        (F(-1, 8), (2, -1), (6, 7)),
        (F(-1, 96), (12, -7), (12, 13)),
        (F(-1, 600), (30, -19), (30, 31)),
        (F(-1, 600), (30, -13), (30, 37)),
    ],
    -4: [(F(-1, 72), (12, -5), (12, 13))],
    -5: [
        (F(-1, 360), (30, -11), (30, 31)),
        (F(-1, 40), (10, -3), (10, 11)),
    ],
}

# (a, c) of the generic-level rows a p^2 + c that only exist for one k
_GENERIC_SQUARE_ROWS = {
    1: [(F(1, 16), 0), (F(1, 144), 0), (F(1, 100), 0), (F(1, 64), 0)],
    2: [
        (F(1, 8), F(-1, 8)),
        (F(1, 72), F(-1, 8)),
        (F(1, 50), F(-1, 8)),
        (F(1, 32), F(-1, 8)),
    ],
    3: [(F(3, 64), F(-1, 3)), (F(1, 48), F(-1, 3)), (F(3, 100), F(-1, 3))],
    4: [
        (F(1, 16), F(-9, 16)),
        (F(1, 36), F(-9, 16)),
        (F(1, 25), F(-9, 16)),
    ],
    5: [(F(5, 144), F(-4, 5)), (F(1, 20), F(-4, 5)), (F(5, 64), F(-4, 5))],
    6: [
        (F(1, 24), F(-25, 24)),
        (F(3, 32), F(-25, 24)),
        (F(3, 50), F(-25, 24)),
    ],
    -1: [(F(-1, 16), 1), (F(-1, 144), 1), (F(-1, 100), 1), (F(-1, 64), 1)],
    -2: [
        (F(-1, 8), F(9, 8)),
        (F(-1, 72), F(9, 8)),
        (F(-1, 50), F(9, 8)),
        (F(-1, 32), F(9, 8)),
    ],
    -3: [(F(-3, 64), F(4, 3)), (F(-1, 48), F(4, 3)), (F(-3, 100), F(4, 3))],
    -4: [
        (F(-1, 16), F(25, 16)),
        (F(-1, 36), F(25, 16)),
        (F(-1, 25), F(25, 16)),
    ],
    -5: [(F(-5, 144), F(9, 5)), (F(-1, 20), F(9, 5)), (F(-5, 64), F(9, 5))],
    -6: [
        (F(-1, 24), F(49, 24)),
        (F(-3, 32), F(49, 24)),
        (F(-3, 50), F(49, 24)),
    ],
}


def classical_rows(k: int) -> List[QuadraticRow]:
    """Quadratic rows of the classical table for degree ``k``."""
    rows = [
        QuadraticRow("thm2.line", F(k, 2), 1 - F(k, 2), F(0)),
        QuadraticRow("thm2.product", F(k, 2), F(k, 2), F(k - 1, 2 * k)),
    ]
    for index, (scale, first, second) in enumerate(
        _THM2_SPECIAL_ROWS.get(k, []), start=1
    ):
        rows.append(_product_row(f"thm2.k{k}.{index}", scale, first, second))
    return rows


def generic_level_rows(k: int) -> List[QuadraticRow]:
    """Rows of the generic-energy-level table for degree ``k``."""
    rows = [
        QuadraticRow("generic.1", F(k), F(k + 1), F(1)),
        QuadraticRow("generic.2", F(k), F(2 * k + 1), F(3 * k + 6, 4)),
        QuadraticRow(
            "generic.3", F(k, 16), F(0), F(2 * k - 1, 4 * k) - F(k, 4)
        ),
    ]
    for index, (a, c) in enumerate(
        _GENERIC_SQUARE_ROWS.get(k, []), start=1
    ):
        rows.append(_square_row(f"generic.k{k}.{index}", a, c))
    return rows


def special_level_rows(k: int) -> List[QuadraticRow]:
    """Rational rows (items 2 and 3) of the special-energy-level table."""
    return [
        QuadraticRow("special.2", F(k, 2), F(k, 2), F(k - 1, 2 * k)),
        QuadraticRow(
            "special.3", F(k, 4), F(k, 4), F(2 * k - 1, 4 * k) - F(3 * k, 16)
        ),
    ]


def _to_fraction(lam: Number) -> Fraction:
    if isinstance(lam, Fraction):
        return lam
    if isinstance(lam, int):
        return Fraction(lam)
    return Fraction(lam).limit_denominator(DEFAULT_TOLERANCES.max_denominator)


def _hits(
    table: Table, rows: Sequence[QuadraticRow], k: int, lam: Fraction
) -> List[FamilyHit]:
    hits = []
    for row in rows:
        for p in row.solve(lam):
            hits.append(FamilyHit(table, row.row_id, p, k, lam))
    return hits


def _check_k(k: int) -> None:
    if k == 0:
        raise ValueError("Degree k must be non-zero.")


def check_thm2(k: int, lam: Number) -> List[FamilyHit]:
    """All rows of the classical table hit by ``(k, lam)``.

    ``k = +-2`` always hits the row that admits any ``lam``.
    """
    _check_k(k)
    lam = _to_fraction(lam)
    hits = []
    if abs(k) == 2:
        hits.append(FamilyHit(Table.THM2, "thm2.arbitrary", None, k, lam))
    return hits + _hits(Table.THM2, classical_rows(k), k, lam)


def generic_table_is_partial(k: int) -> bool:
    """The generic-level table carries no k-specific rows for |k| > 6."""
    return abs(k) > GENERIC_TABLE_MAX_K


def check_generic_level(k: int, lam: Number) -> List[FamilyHit]:
    """All rows of the generic-energy-level table hit by ``(k, lam)``."""
    _check_k(k)
    if generic_table_is_partial(k):
        logger.debug(f"Generic-level table is partial for k={k}")
    return _hits(
        Table.GENERIC_LEVEL, generic_level_rows(k), k, _to_fraction(lam)
    )


def _integer_set_hits(
    table: Table, k: int, lam: Fraction, include_small: bool
) -> List[FamilyHit]:
    if lam.denominator != 1:
        # f(k, p, +-1) is an integer or irrational, never a proper fraction
        return []
    hits = []
    witness = in_J_pm(k, lam.numerator)
    if witness.member:
        sign = "+" if witness.set_name.value == "JPlus" else "-"
        hits.append(
            FamilyHit(table, f"J{sign}", witness.witness_p, k, lam)
        )
    if include_small and abs(k) <= 2:
        small = in_J_k_small(k, lam.numerator)
        if small.member:
            hits.append(
                FamilyHit(
                    table, small.set_name.value, small.witness_p, k, lam
                )
            )
    return hits


def check_special_level(k: int, lam: Number) -> List[FamilyHit]:
    """All items of the special-energy-level table hit by ``(k, lam)``."""
    _check_k(k)
    lam = _to_fraction(lam)
    return _integer_set_hits(
        Table.SPECIAL_LEVEL, k, lam, include_small=False
    ) + _hits(Table.SPECIAL_LEVEL, special_level_rows(k), k, lam)


def check_combined_level(k: int, lam: Number) -> List[FamilyHit]:
    """Conditions shared by both energy levels: ``lam`` in J+ u J-, or
    the special-level item 3 family, or ``lam`` in ``J_k`` for
    ``|k| = 1``."""
    _check_k(k)
    lam = _to_fraction(lam)
    hits = _integer_set_hits(
        Table.COMBINED_LEVEL, k, lam, include_small=abs(k) == 1
    )
    item_three = special_level_rows(k)[1]
    return hits + _hits(
        Table.COMBINED_LEVEL,
        [QuadraticRow("combined.2", item_three.a, item_three.b, item_three.c)],
        k,
        lam,
    )


@dataclass(frozen=True)
class ExponentDifferences:
    """Exponent differences at the three singular points of the
    special-level equation."""

    rho: complex
    sigma: float
    tau: complex

    def as_tuple(self) -> Tuple[complex, float, complex]:
        return (self.rho, self.sigma, self.tau)


def _principal_sqrt(value: float) -> Union[float, complex]:
    return math.sqrt(value) if value >= 0 else cmath.sqrt(value)


def riemann_exponents(k: int, lam: Number) -> ExponentDifferences:
    """``rho = sqrt((k-2)^2 + 8k lam) / 2|k|``, ``sigma = 1/2``,
    ``tau = sqrt((k-1)^2 + 4k lam) / |k|``; principal roots, complex when
    the radicand is negative."""
    _check_k(k)
    if isinstance(lam, complex):
        rho = cmath.sqrt((k - 2) ** 2 + 8 * k * lam) / (2 * abs(k))
        tau = cmath.sqrt((k - 1) ** 2 + 4 * k * lam) / abs(k)
        return ExponentDifferences(rho, 0.5, tau)
    value = float(lam)
    return ExponentDifferences(
        rho=_principal_sqrt((k - 2) ** 2 + 8 * k * value) / (2 * abs(k)),
        sigma=0.5,
        tau=_principal_sqrt((k - 1) ** 2 + 4 * k * value) / abs(k),
    )


# fractional parts of the fifteen Schwarz families and whether the
# integer shifts must have an even sum
_SCHWARZ_ROWS: Tuple[Tuple[Tuple[Optional[Fraction], ...], bool], ...] = (
    ((F(1, 2), F(1, 2), None), False),
    ((F(1, 2), F(1, 3), F(1, 3)), False),
    ((F(2, 3), F(1, 3), F(1, 3)), True),
    ((F(1, 2), F(1, 3), F(1, 4)), False),
    ((F(2, 3), F(1, 4), F(1, 4)), True),
    ((F(1, 2), F(1, 3), F(1, 5)), False),
    ((F(2, 5), F(1, 3), F(1, 3)), True),
    ((F(2, 3), F(1, 5), F(1, 5)), True),
    ((F(1, 2), F(2, 5), F(1, 5)), False),
    ((F(3, 5), F(1, 3), F(1, 5)), True),
    ((F(2, 5), F(2, 5), F(2, 5)), True),
    ((F(2, 3), F(1, 3), F(1, 5)), True),
    ((F(4, 5), F(1, 5), F(1, 5)), True),
    ((F(1, 2), F(2, 5), F(1, 3)), False),
    ((F(3, 5), F(2, 5), F(1, 3)), True),
)


@dataclass(frozen=True)
class KimuraResult:
    """``case`` is ``"ConditionI"``, ``"SchwarzRow(n)"`` or None."""

    solvable: bool
    case: Optional[str]


def _near_integer(value: complex, tolerance: float) -> Optional[int]:
    value = complex(value)
    if abs(value.imag) > tolerance:
        return None
    nearest = round(value.real)
    if abs(value.real - nearest) > tolerance:
        return None
    return int(nearest)


def _matches_row(
    values: Tuple[complex, complex, complex],
    fractions: Tuple[Optional[Fraction], ...],
    even_shift: bool,
    tolerance: float,
) -> bool:
    shifts = []
    for value, fraction in zip(values, fractions):
        if fraction is None:
            continue
        shift = _near_integer(value - float(fraction), tolerance)
        if shift is None:
            return False
        shifts.append(shift)
    return not even_shift or sum(shifts) % 2 == 0


def kimura_solvable(
    rho: complex,
    sigma: complex,
    tau: complex,
    tolerance: float = DEFAULT_TOLERANCES.kimura,
) -> KimuraResult:
    """Solvability of a Riemann P-equation from its exponent differences.

    Condition I asks for an odd integer among ``rho + tau + sigma``,
    ``-rho + tau + sigma``, ``rho - tau + sigma`` and ``rho + tau - sigma``.
    Condition II asks for ``+-rho``, ``+-sigma``, ``+-tau`` to fit one of
    the fifteen Schwarz families in some order, with the integer shifts
    solved from the fractional parts.
    """
    sums = (
        rho + tau + sigma,
        -rho + tau + sigma,
        rho - tau + sigma,
        rho + tau - sigma,
    )
    for total in sums:
        integer = _near_integer(total, tolerance)
        if integer is not None and integer % 2 == 1:
            return KimuraResult(True, "ConditionI")

    for row_number, (fractions, even_shift) in enumerate(
        _SCHWARZ_ROWS, start=1
    ):
        for ordering in itertools.permutations((rho, sigma, tau)):
            for signs in itertools.product((1, -1), repeat=3):
                values = tuple(s * v for s, v in zip(signs, ordering))
                if _matches_row(values, fractions, even_shift, tolerance):
                    return KimuraResult(True, f"SchwarzRow({row_number})")
    return KimuraResult(False, None)


@dataclass
class EigenvalueVerdict:
    """How one non-trivial eigenvalue fared against every table."""

    lam: complex
    point_index: Optional[int]
    rational: Optional[Fraction]
    integer_reconstruction: Optional[int]
    memberships: List[MembershipWitness] = field(default_factory=list)
    hits: List[FamilyHit] = field(default_factory=list)
    kimura: Optional[KimuraResult] = None
    passes_main_theorem: bool = False
    passes_classical: bool = False
    reason: str = ""


@dataclass
class IntegrabilityVerdict:
    """Aggregated verdict over every supplied eigenvalue."""

    k: int
    per_eigenvalue: List[EigenvalueVerdict]
    overall: Verdict
    classical_overall: Verdict
    explanation: str
    partial_table: bool = False

    @property
    def inconsistent(self) -> bool:
        """Relativistic pass with classical failure contradicts the
        implication from relativistic to classical integrability."""
        return (
            self.overall == Verdict.PASSES_NECESSARY_CONDITIONS
            and self.classical_overall == Verdict.CANNOT_BE_INTEGRABLE
        )


def _judge(
    k: int,
    lam: complex,
    rational: Optional[Fraction],
    point_index: Optional[int],
    tolerances: Tolerances,
) -> EigenvalueVerdict:
    verdict = EigenvalueVerdict(
        lam=lam,
        point_index=point_index,
        rational=rational,
        integer_reconstruction=(
            rational.numerator
            if rational is not None and rational.denominator == 1
            else None
        ),
    )
    if abs(lam.imag) > tolerances.imaginary_cut:
        verdict.reason = (
            f"eigenvalue {lam} is complex; integrability requires integers"
        )
        verdict.passes_classical = abs(k) == 2
        return verdict

    if rational is not None:
        thm2 = check_thm2(k, rational)
        verdict.passes_classical = bool(thm2)
        verdict.hits = (
            thm2
            + check_generic_level(k, rational)
            + check_special_level(k, rational)
            + check_combined_level(k, rational)
        )
        verdict.kimura = kimura_solvable(
            *riemann_exponents(k, rational).as_tuple(),
            tolerance=tolerances.kimura,
        )
    else:
        verdict.passes_classical = abs(k) == 2

    if verdict.integer_reconstruction is None:
        verdict.reason = (
            f"eigenvalue {lam.real:.12g} is not an integer; integrability "
            "requires integers"
        )
        return verdict

    value = verdict.integer_reconstruction
    memberships = [in_J_pm(k, value)]
    if abs(k) <= 2:
        memberships.append(in_J_k_small(k, value))
    verdict.memberships = memberships
    members = [m for m in memberships if m.member]
    verdict.passes_main_theorem = bool(members)
    if members:
        witness = members[0]
        verdict.reason = (
            f"{value} is in {witness.set_name.value} "
            f"(p={witness.witness_p})"
        )
    else:
        allowed = "J+ u J-" + (f" u J_{k}" if abs(k) <= 2 else "")
        verdict.reason = f"{value} is not in {allowed}"
    return verdict


def _collect_eigenvalues(
    spectra: Sequence[Union[SpectrumReport, Number]],
    tolerances: Tolerances,
) -> List[Tuple[complex, Optional[Fraction], Optional[int]]]:
    collected = []
    for index, item in enumerate(spectra):
        if isinstance(item, SpectrumReport):
            pairs = zip(item.nontrivial, item.nontrivial_rational)
            for lam, rational in pairs:
                collected.append((complex(lam), rational, index))
            continue
        if isinstance(item, Fraction):
            collected.append((complex(float(item)), item, None))
            continue
        lam = complex(item)
        rational = None
        if abs(lam.imag) <= tolerances.imaginary_cut:
            rational = reconstruct_rational(
                lam.real,
                max_denominator=tolerances.max_denominator,
                tolerance=tolerances.reconstruction,
            )
        collected.append((lam, rational, None))
    for lam, _, _ in collected:
        if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
            raise ValueError(f"Spectrum contains a non-finite value: {lam}")
    return collected


def main_theorem_verdict(
    k: int,
    spectrum: Sequence[Union[SpectrumReport, Number]],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> IntegrabilityVerdict:
    """Tests every non-trivial eigenvalue against the relativistic
    conditions.

    Args:
        k: Degree of the potential.
        spectrum: Spectrum reports of all Darboux points, or bare
            eigenvalues supplied by the caller.
        tolerances: Reconstruction and complex-detection tolerances.

    Returns:
        A verdict that passes only if every eigenvalue is an integer of
        ``J+ u J-`` (``J_k u J+ u J-`` for ``|k| <= 2``). With no
        eigenvalues at all the conditions hold vacuously.

    Raises:
        ValueError: If ``k == 0`` or an eigenvalue is not finite.
    """
    _check_k(k)
    eigenvalues = _collect_eigenvalues(spectrum, tolerances)
    per_eigenvalue = [
        _judge(k, lam, rational, index, tolerances)
        for lam, rational, index in eigenvalues
    ]
    passes = all(v.passes_main_theorem for v in per_eigenvalue)
    classical = all(v.passes_classical for v in per_eigenvalue)
    overall = (
        Verdict.PASSES_NECESSARY_CONDITIONS
        if passes
        else Verdict.CANNOT_BE_INTEGRABLE
    )
    classical_overall = (
        Verdict.PASSES_NECESSARY_CONDITIONS
        if classical
        else Verdict.CANNOT_BE_INTEGRABLE
    )
    if not per_eigenvalue:
        explanation = (
            "No Darboux point with non-zero gamma: the conditions give no "
            "obstruction."
        )
    elif passes:
        explanation = "Every non-trivial eigenvalue is admissible."
    else:
        failures = [v for v in per_eigenvalue if not v.passes_main_theorem]
        explanation = "; ".join(v.reason for v in failures)
    logger.info(f"Verdict for k={k}: {overall.value} ({explanation})")
    return IntegrabilityVerdict(
        k=k,
        per_eigenvalue=per_eigenvalue,
        overall=overall,
        classical_overall=classical_overall,
        explanation=explanation,
        partial_table=generic_table_is_partial(k),
    )


def classical_verdict(
    k: int,
    spectrum: Sequence[Union[SpectrumReport, Number]],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Verdict:
    """Verdict of the classical table alone."""
    return main_theorem_verdict(k, spectrum, tolerances).classical_overall
