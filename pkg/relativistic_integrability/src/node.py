"""Defines the nodes of the graph that checks a potential for relativistic
integrability."""

import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, TypedDict

from .algebra import HomogeneousPotential
from .darboux import (DarbouxPoint, SpectrumReport, aggregate_spectrum,
                      find_darboux_points, spectrum, universal_relation)
from .errors import IntegrabilityToolError, PoleError, PotentialError
from .file_io import load_potential
from .galois_conditions import (EigenvalueVerdict, IntegrabilityVerdict,
                                main_theorem_verdict)
from .schemas import (CheckReport, DarbouxPointReport, EigenvalueReport,
                      FamilyHitReport, PotentialFile, SpectrumBlock)
from .settings import Tolerances

# Logger
logger = logging.getLogger(__name__)


class GraphState(TypedDict):
    """State of the check pipeline.

    Attributes:
        potential_path (Path):
            The potential file to check.
        tolerances (Tolerances):
            Tolerances of every algebraic stage.
        explain (bool):
            Whether per-table diagnostics go into the report.
        potential_file (Optional[PotentialFile]):
            Validated file contents.
        potential (Optional[HomogeneousPotential]):
            The potential built from the file.
        darboux_points (List[DarbouxPoint]):
            Darboux points with non-zero multiplier.
        spectra (List[SpectrumReport]):
            Spectrum of the scaled Hessian at each point.
        verdict (Optional[IntegrabilityVerdict]):
            Outcome of the eigenvalue tests.
        report (Optional[CheckReport]):
            The serializable report.
    """

    potential_path: Path
    tolerances: Tolerances
    explain: bool
    potential_file: Optional[PotentialFile]
    potential: Optional[HomogeneousPotential]
    darboux_points: List[DarbouxPoint]
    spectra: List[SpectrumReport]
    verdict: Optional[IntegrabilityVerdict]
    report: Optional[CheckReport]


def load_potential_file(state: GraphState) -> GraphState:
    """Reads the potential file and builds a homogeneous planar potential.

    Args:
        state (GraphState):
            The current state, containing `potential_path`.

    Returns:
        GraphState:
            The updated state with `potential_file` and `potential`
            populated.

    Raises:
        PotentialError: If the file is invalid or the potential is not a
            homogeneous polynomial in two variables.
    """
    logger.info("--- Executing Node: load_potential_file ---")
    potential_file = load_potential(state["potential_path"])
    if potential_file.kind != "homogeneous":
        raise PotentialError(
            f"check needs a homogeneous potential, got '{potential_file.kind}'"
        )
    if potential_file.n != 2:
        raise PotentialError(
            f"check locates Darboux points for n=2, got n={potential_file.n}"
        )
    updated_state = state.copy()
    updated_state["potential_file"] = potential_file
    updated_state["potential"] = potential_file.to_potential()
    logger.info(f"Checking {updated_state['potential']}")
    return updated_state


def locate_darboux_points(state: GraphState) -> GraphState:
    """Finds every Darboux point of the potential.

    Directions whose multiplier vanishes are left out, so the list may be
    empty; the next edge then skips the spectrum stage.

    Args:
        state (GraphState):
            The current state, containing `potential` and `tolerances`.

    Returns:
        GraphState:
            The updated state with `darboux_points` populated.

    Raises:
        DarbouxError: If the Darboux polynomial cannot be solved.
    """
    logger.info("--- Executing Node: locate_darboux_points ---")
    points = find_darboux_points(state["potential"], state["tolerances"])
    for point in points:
        logger.debug(f"Darboux point d={point.d}, gamma={point.gamma}")
    updated_state = state.copy()
    updated_state["darboux_points"] = points
    return updated_state


def compute_spectra(state: GraphState) -> GraphState:
    """Computes the spectrum of the scaled Hessian at each point.

    Args:
        state (GraphState):
            The current state, containing `potential`, `darboux_points` and
            `tolerances`.

    Returns:
        GraphState:
            The updated state with one `spectra` entry per Darboux point,
            in the same order.
    """
    logger.info("--- Executing Node: compute_spectra ---")
    reports = [
        spectrum(state["potential"], point, state["tolerances"])
        for point in state["darboux_points"]
    ]
    updated_state = state.copy()
    updated_state["spectra"] = reports
    logger.info(
        f"Computed spectra at {len(reports)} point(s): "
        f"{[list(r.nontrivial) for r in reports]}"
    )
    return updated_state


def judge_spectra(state: GraphState) -> GraphState:
    """Tests every non-trivial eigenvalue against the integer sets.

    Args:
        state (GraphState):
            The current state, containing `potential`, `spectra` and
            `tolerances`.

    Returns:
        GraphState:
            The updated state with `verdict` populated.

    Raises:
        RuntimeError: If judging fails for a reason other than a toolkit
            error, which is re-raised unchanged.
    """
    logger.info("--- Executing Node: judge_spectra ---")
    try:
        verdict = main_theorem_verdict(
            state["potential"].k, state["spectra"], state["tolerances"]
        )
    except IntegrabilityToolError:
        raise
    except Exception as e:
        logger.error(
            f"An unexpected error occurred while judging spectra: {e}",
            exc_info=True,
        )
        raise RuntimeError("Failed to judge the spectra.") from e
    if verdict.inconsistent:
        logger.warning(
            "Relativistic conditions pass while classical ones fail; "
            "check the tolerances"
        )
    updated_state = state.copy()
    updated_state["verdict"] = verdict
    return updated_state


def _pair(value: complex):
    value = complex(value)
    return (value.real, value.imag)


def _eigenvalue_report(
    verdict: EigenvalueVerdict, explain: bool
) -> EigenvalueReport:
    hits = None
    if explain:
        hits = [
            FamilyHitReport(
                table=hit.table.value,
                row_id=hit.row_id,
                parameter_p=hit.parameter_p,
            )
            for hit in verdict.hits
        ]
    return EigenvalueReport(
        value=_pair(verdict.lam),
        rational=_fraction_text(verdict.rational),
        integer=verdict.integer_reconstruction,
        passes=verdict.passes_main_theorem,
        passes_classical=verdict.passes_classical,
        reason=verdict.reason,
        memberships=[
            f"{m.set_name.value}(p={m.witness_p})"
            for m in verdict.memberships
            if m.member
        ],
        hits=hits,
        kimura_case=(
            verdict.kimura.case
            if explain and verdict.kimura is not None
            else None
        ),
    )


def _fraction_text(value: Optional[Fraction]) -> Optional[str]:
    """``p/q`` with an explicit denominator, also for integers."""
    if value is None:
        return None
    return f"{value.numerator}/{value.denominator}"


def _relation_value(spectra: List[SpectrumReport]) -> Optional[complex]:
    if not spectra or any(r.point.continuum for r in spectra):
        return None
    try:
        return universal_relation(aggregate_spectrum(spectra))
    except PoleError:
        return None


def assemble_report(state: GraphState) -> GraphState:
    """Builds the serializable check report.

    Each point carries its eigenvalues as a `trivial`/`nontrivial`/
    `rational` block and the verdict of every non-trivial eigenvalue
    under `checks`.

    Args:
        state (GraphState):
            The current state after judgement, containing
            `potential_file`, `spectra`, `verdict` and `explain`.

    Returns:
        GraphState:
            The updated state with `report` populated.
    """
    logger.info("--- Executing Node: assemble_report ---")
    verdict = state["verdict"]
    by_point = {}
    for item in verdict.per_eigenvalue:
        by_point.setdefault(item.point_index, []).append(item)

    points = []
    for index, report in enumerate(state["spectra"]):
        point = report.point
        points.append(
            DarbouxPointReport(
                d=[_pair(x) for x in point.d],
                gamma=_pair(point.gamma),
                residual=point.residual,
                eigenvalues=SpectrumBlock(
                    trivial=_pair(report.trivial_eigenvalue),
                    nontrivial=[_pair(lam) for lam in report.nontrivial],
                    rational=[
                        _fraction_text(r) for r in report.nontrivial_rational
                    ],
                ),
                normalization=point.normalization.value,
                multiplicity=point.multiplicity,
                continuum=point.continuum,
                checks=[
                    _eigenvalue_report(item, state["explain"])
                    for item in by_point.get(index, [])
                ],
            )
        )
    relation = _relation_value(state["spectra"])
    updated_state = state.copy()
    updated_state["report"] = CheckReport(
        potential=state["potential_file"],
        k=state["potential"].k,
        points=points,
        verdict=verdict.overall.value,
        classical_verdict=verdict.classical_overall.value,
        explanation=verdict.explanation,
        inconsistent=verdict.inconsistent,
        partial_table=verdict.partial_table,
        universal_relation=None if relation is None else _pair(relation),
    )
    logger.info(f"Report assembled: {verdict.overall.value}")
    return updated_state


def should_compute_spectra(state: GraphState) -> str:
    """Decides whether the spectrum stage runs.

    Args:
        state (GraphState):
            The current state after `locate_darboux_points`.

    Returns:
        str:
            `compute_spectra` when Darboux points were found, `judge`
            otherwise.
    """
    if state.get("darboux_points"):
        return "compute_spectra"
    logger.info("No Darboux points. Proceeding to judgement.")
    return "judge"
