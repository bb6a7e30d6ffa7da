"""Drivers of the command-line subcommands.

Each driver takes a validated :class:`RunConfig`, produces its result text
and returns an exit code: 0 for success or a passing verdict, 1 when the
potential cannot be integrable. Errors propagate to ``main``, which maps
them to exit code 2.
"""

import logging
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np
import pandas as pd

from . import __version__
from .dynamics import (HamiltonianSystem, Kinetic, integrate,
                       poincare_section, seed_section_states)
from .errors import ConfigError
from .file_io import (frame_csv, load_potential, report_json, reports_json,
                      save_manifest, sections_frame, sections_svg,
                      trajectory_frame, write_text)
from .graph_builder import build_check_graph
from .integer_sets import (enumerate_J_pm, enumerate_J_pm_via_pell,
                           integer_density_scan)
from .presets import load_preset
from .schemas import (CheckReport, JScanReport, JSetReport, OrbitSummary,
                      PoincareReport, RunManifest)
from .settings import RunConfig, worker_count

# Logger
logger = logging.getLogger(__name__)

DEFAULT_FORMATS: Dict[str, str] = {
    "check": "json",
    "jset": "json",
    "jscan": "json",
    "poincare": "csv",
    "simulate": "csv",
}
ALLOWED_FORMATS: Dict[str, Tuple[str, ...]] = {
    "check": ("json", "text"),
    "jset": ("json", "text", "csv"),
    "jscan": ("json", "text"),
    "poincare": ("csv", "svg", "json"),
    "simulate": ("csv", "json"),
}
VERSIONED_PACKAGES: Tuple[str, ...] = (
    "numpy",
    "scipy",
    "sympy",
    "pandas",
    "matplotlib",
    "pydantic",
    "langgraph",
)


@dataclass
class CommandResult:
    """Exit code and rendered output of one run."""

    exit_code: int
    contents: str
    outputs: List[str] = field(default_factory=list)


def output_format(config: RunConfig) -> str:
    """Requested format, or the command's default.

    Raises:
        ConfigError: If the command cannot emit the format.
    """
    chosen = config.format or DEFAULT_FORMATS[config.command]
    if chosen not in ALLOWED_FORMATS[config.command]:
        raise ConfigError(
            f"{config.command} cannot write '{chosen}'; choose from "
            f"{', '.join(ALLOWED_FORMATS[config.command])}"
        )
    return chosen


def _kinetic(config: RunConfig) -> Kinetic:
    if config.kinetic == "rel":
        return Kinetic.RELATIVISTIC
    return Kinetic.CLASSICAL


def render_check_text(report: CheckReport) -> str:
    lines = [
        f"verdict: {report.verdict}",
        f"classical verdict: {report.classical_verdict}",
        f"explanation: {report.explanation}",
    ]
    for index, point in enumerate(report.points):
        lines.append(f"point {index}: d={point.d} gamma={point.gamma}")
        for eigenvalue in point.checks:
            exact = eigenvalue.rational or "irrational/complex"
            lines.append(
                f"  lambda={eigenvalue.value[0]:.12g}"
                f"{eigenvalue.value[1]:+.3g}i ({exact}): {eigenvalue.reason}"
            )
            for hit in eigenvalue.hits or []:
                lines.append(
                    f"    {hit.table} {hit.row_id} p={hit.parameter_p}"
                )
            if eigenvalue.kimura_case:
                lines.append(f"    Kimura: {eigenvalue.kimura_case}")
    return "\n".join(lines) + "\n"


def cmd_check(config: RunConfig) -> CommandResult:
    """Darboux points, spectra and verdict of a potential file.

    JSON output is an array with one element per Darboux point; the
    verdict is carried by the exit code and the text format.
    """
    chosen = output_format(config)
    graph = build_check_graph()
    out = graph.invoke(
        {
            "potential_path": config.potential_path,
            "tolerances": config.tolerances,
            "explain": config.explain,
            "potential_file": None,
            "potential": None,
            "darboux_points": [],
            "spectra": [],
            "verdict": None,
            "report": None,
        }
    )
    report: CheckReport = out["report"]
    if chosen == "json":
        contents = reports_json(report.points)
    else:
        contents = render_check_text(report)
    exit_code = 0 if report.verdict == "PassesNecessaryConditions" else 1
    return CommandResult(exit_code, contents)


def cmd_jset(config: RunConfig) -> CommandResult:
    """Least elements of J+ u J- by absolute value."""
    chosen = output_format(config)
    enumerate_values = (
        enumerate_J_pm if config.method == "conic" else enumerate_J_pm_via_pell
    )
    values = enumerate_values(config.k, config.count)
    report = JSetReport(
        k=config.k, count=config.count, method=config.method, values=values
    )
    if chosen == "json":
        contents = report_json(report)
    elif chosen == "csv":
        contents = "value\n" + "".join(f"{v}\n" for v in values)
    else:
        contents = ", ".join(str(v) for v in values) + "\n"
    return CommandResult(0, contents)


def cmd_jscan(config: RunConfig) -> CommandResult:
    """Integer values of f(k, p, +-1) for ``|p| <= p_bound``."""
    chosen = output_format(config)
    scan = integer_density_scan(
        config.k, config.p_bound, workers=worker_count()
    )
    report = JScanReport(
        k=config.k,
        p_bound=config.p_bound,
        parameter_count=scan.parameter_count,
        hit_count=scan.hit_count,
        parameters=list(scan.parameters),
    )
    if chosen == "json":
        contents = report_json(report)
    else:
        contents = f"{scan.parameter_count}\n"
    return CommandResult(0, contents)


def _potential_for_dynamics(config: RunConfig):
    if config.potential_path is not None:
        return load_potential(config.potential_path).to_potential()
    return load_preset(config.preset).potential.to_potential()


def _seeds(config: RunConfig):
    if config.energy is None:
        raise ConfigError(f"{config.command} needs --energy or --preset")
    V = _potential_for_dynamics(config)
    kinetic = _kinetic(config)
    states = seed_section_states(V, kinetic, config.energy, config.seed_grid)
    return V, kinetic, states


def cmd_poincare(config: RunConfig) -> CommandResult:
    """Section points on ``q1 = 0``, ``p1 > 0`` of every seeded orbit."""
    chosen = output_format(config)
    V, kinetic, states = _seeds(config)
    sections = poincare_section(
        V,
        kinetic,
        states,
        config.t_end,
        config.energy,
        section=config.section,
        integrator=config.integrator,
        workers=worker_count(),
    )
    if chosen == "csv":
        contents = frame_csv(sections_frame(sections))
    elif chosen == "svg":
        title = config.preset or Path(config.potential_path).stem
        contents = sections_svg(sections, f"{title}, {kinetic.value}")
    else:
        contents = report_json(
            PoincareReport(
                kinetic=kinetic.value,
                energy=config.energy,
                t_end=config.t_end,
                orbits=[
                    OrbitSummary(
                        orbit_id=orbit.orbit_id,
                        status=orbit.status.value,
                        crossings=len(orbit.points),
                        energy_drift=orbit.energy_drift,
                        casimir_drift=orbit.casimir_drift,
                        message=orbit.message,
                    )
                    for orbit in sections
                ],
            )
        )
    return CommandResult(0, contents)


def cmd_simulate(config: RunConfig) -> CommandResult:
    """Full state of every seeded orbit at evenly spaced times."""
    chosen = output_format(config)
    V, kinetic, states = _seeds(config)
    system = HamiltonianSystem(V, kinetic)
    times = np.linspace(0.0, config.t_end, config.samples)
    frames = []
    for orbit_id, state in enumerate(states):
        trajectory = integrate(
            V, kinetic, state, config.t_end, config.integrator, t_eval=times
        )
        frame = trajectory_frame(trajectory, system)
        frame.insert(0, "orbit_id", orbit_id)
        frames.append(frame)
    combined = pd.concat(frames, ignore_index=True)
    if chosen == "csv":
        contents = frame_csv(combined)
    else:
        contents = combined.to_json(orient="records", indent=2) + "\n"
    return CommandResult(0, contents)


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "check": cmd_check,
    "jset": cmd_jset,
    "jscan": cmd_jscan,
    "poincare": cmd_poincare,
    "simulate": cmd_simulate,
}


def dependency_versions() -> Dict[str, str]:
    versions = {}
    for package in VERSIONED_PACKAGES:
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def run(config: RunConfig) -> CommandResult:
    """Runs one command and writes its output and manifest.

    The result goes to ``config.output_path`` when set, with a manifest
    alongside; otherwise the caller prints ``contents``.
    """
    logger.info(f"Running '{config.command}'")
    result = COMMANDS[config.command](config)
    if config.output_path is not None:
        write_text(result.contents, config.output_path)
        manifest = RunManifest(
            tool_version=__version__,
            command=config.command,
            config=config,
            versions=dependency_versions(),
            outputs=[str(config.output_path)],
        )
        manifest_path = save_manifest(manifest, config.output_path)
        result.outputs = [str(config.output_path), str(manifest_path)]
    return result
