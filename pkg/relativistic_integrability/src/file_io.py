"""Functions responsible for loading input files and writing results."""

import io
import json
import logging
import os
from pathlib import Path
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402
from pydantic import BaseModel, TypeAdapter, ValidationError  # noqa: E402

from .dynamics import HamiltonianSystem, OrbitSection, Trajectory  # noqa
from .errors import ConfigError, PotentialError  # noqa: E402
from .schemas import PotentialFile, RunManifest  # noqa: E402

# Logger
logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT: str = "%.17g"
SECTION_COLUMNS: List[str] = [
    "orbit_id",
    "crossing_index",
    "t",
    "q2",
    "p2",
    "energy",
    "casimir_drift",
]


def get_file_contents(filename: Path) -> str:
    """Function opens a file and returns contents as string."""
    with open(filename, "r", encoding="utf-8") as file:
        return file.read()


def format_validation_error(error: ValidationError) -> str:
    """Joins pydantic errors into ``field.path: message`` lines."""
    lines = []
    for item in error.errors():
        message = item["msg"].removeprefix("Value error, ")
        location = ".".join(str(part) for part in item["loc"])
        lines.append(f"{location}: {message}" if location else message)
    return "; ".join(lines)


def load_potential(file_path: Path) -> PotentialFile:
    """Reads and validates a potential file.

    Args:
        file_path: JSON file of the form
            ``{"n": 2, "k": 3, "monomials": [{"c": [1, 0], "e": [3, 0]}]}``.

    Returns:
        The validated file contents.

    Raises:
        PotentialError: If the file is missing, is not JSON or violates the
            schema; the message names the offending field.
    """
    try:
        raw = json.loads(get_file_contents(file_path))
    except FileNotFoundError as e:
        raise PotentialError(f"Potential file not found: {file_path}") from e
    except json.JSONDecodeError as e:
        raise PotentialError(
            f"{file_path}: line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e
    try:
        potential_file = PotentialFile.model_validate(raw)
    except ValidationError as e:
        raise PotentialError(
            f"{file_path}: {format_validation_error(e)}"
        ) from e
    logger.info(f"Loaded potential from {file_path}")
    return potential_file


def write_text(contents: str, output_path: Optional[Path]) -> str:
    """Writes ``contents`` to ``output_path``; returns them unchanged."""
    if output_path is not None:
        os.makedirs(Path(output_path).parent, exist_ok=True)
        with open(output_path, "w", encoding="utf-8", newline="\n") as file:
            file.write(contents)
        logger.info(f"Results saved to: {output_path}")
    return contents


def report_json(report: BaseModel) -> str:
    return report.model_dump_json(indent=2) + "\n"


def reports_json(reports: Sequence[BaseModel]) -> str:
    """A JSON array of reports of one model type."""
    if not reports:
        return "[]\n"
    adapter = TypeAdapter(List[type(reports[0])])
    return adapter.dump_json(list(reports), indent=2).decode() + "\n"


def sections_frame(sections: Sequence[OrbitSection]) -> pd.DataFrame:
    """One row per crossing, ordered by orbit then crossing."""
    rows = [
        {
            "orbit_id": orbit.orbit_id,
            "crossing_index": point.crossing_index,
            "t": point.t,
            "q2": point.coords[0],
            "p2": point.coords[1],
            "energy": point.energy,
            "casimir_drift": point.casimir_drift,
        }
        for orbit in sections
        for point in orbit.points
    ]
    return pd.DataFrame(rows, columns=SECTION_COLUMNS)


def trajectory_frame(
    trajectory: Trajectory, system: HamiltonianSystem
) -> pd.DataFrame:
    """Full state, energy and Casimir at every sample."""
    n = system.n
    rows = []
    for state in trajectory.states:
        row = {"t": state.t}
        row.update({f"q{i + 1}": state.q[i] for i in range(n)})
        row.update({f"p{i + 1}": state.p[i] for i in range(n)})
        row["u"] = state.u
        row["energy"] = system.state_energy(state)
        row["casimir"] = state.casimir
        rows.append(row)
    return pd.DataFrame(rows)


def frame_csv(frame: pd.DataFrame) -> str:
    """CSV text with a fixed float format and line terminator."""
    buffer = io.StringIO()
    frame.to_csv(
        buffer,
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        lineterminator="\n",
    )
    return buffer.getvalue()


def sections_svg(sections: Sequence[OrbitSection], title: str) -> str:
    """Scatter of every orbit's section points as SVG text.

    The hash salt and the absence of a date keep the output identical
    across runs.
    """
    with plt.rc_context({"svg.hashsalt": "relativistic-integrability"}):
        figure, axes = plt.subplots(figsize=(6, 6))
        for orbit in sections:
            coords = orbit.coordinates
            if len(coords):
                axes.scatter(coords[:, 0], coords[:, 1], s=1)
        axes.set_xlabel("q2")
        axes.set_ylabel("p2")
        axes.set_title(title)
        buffer = io.StringIO()
        figure.savefig(buffer, format="svg", metadata={"Date": None})
        plt.close(figure)
    return buffer.getvalue()


def manifest_path_for(output_path: Path) -> Path:
    """``results.csv`` -> ``results.csv.manifest.json``."""
    output_path = Path(output_path)
    return output_path.with_name(f"{output_path.name}.manifest.json")


def save_manifest(manifest: RunManifest, output_path: Path) -> Path:
    """Writes the manifest next to the result file it describes."""
    manifest_path = manifest_path_for(output_path)
    write_text(report_json(manifest), manifest_path)
    return manifest_path


def load_manifest(manifest_path: Path) -> RunManifest:
    """Reads a manifest written by :func:`save_manifest`.

    Raises:
        ConfigError: If the file is missing or invalid.
    """
    try:
        return RunManifest.model_validate_json(
            get_file_contents(manifest_path)
        )
    except FileNotFoundError as e:
        raise ConfigError(f"Manifest not found: {manifest_path}") from e
    except ValidationError as e:
        raise ConfigError(
            f"{manifest_path}: {format_validation_error(e)}"
        ) from e
