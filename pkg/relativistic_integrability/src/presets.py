"""Functions relating to the loading of named experiment presets."""

import json
import logging
from pathlib import Path
from typing import List

from pydantic import BaseModel, Field, ValidationError

from .dynamics import Kinetic
from .errors import ConfigError
from .schemas import PotentialFile
from .settings import DEFAULT_SEED_GRID, SeedGrid

# Logger
logger = logging.getLogger(__name__)

PRESETS_DIRECTORY: Path = Path(__file__).resolve().parent.parent / "presets"


class Preset(BaseModel):
    """A reproducible section experiment.

    The energy is given relative to the minimum of the kinetic energy, so
    the same preset serves both kinetics.
    """

    name: str
    description: str
    potential: PotentialFile
    kinetic: Kinetic = Kinetic.RELATIVISTIC
    energy_offset: float = Field(
        ..., description="E - E_min, with E_min = 1 (rel) or 0 (classical)."
    )
    t_end: float = Field(1000.0, gt=0)
    seed_grid: SeedGrid = DEFAULT_SEED_GRID

    def energy(self, kinetic: Kinetic) -> float:
        return kinetic.minimum_energy + self.energy_offset


def load_preset(
    preset_name: str, presets_directory: Path = PRESETS_DIRECTORY
) -> Preset:
    """Loads a preset from a JSON file.

    This function follows a convention where the preset file is expected
    to be located at `{presets_directory}/{preset_name}_preset.json`.

    Args:
        preset_name: The base name of the preset (e.g., 'kepler').
        presets_directory: The directory where preset files are stored.

    Returns:
        The validated preset.

    Raises:
        ConfigError: If the file does not exist or is not a valid preset.
    """
    file_path = Path(presets_directory) / f"{preset_name}_preset.json"
    try:
        raw = json.loads(file_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(
            f"Preset file not found at: {file_path}. "
            f"Known presets: {', '.join(available_presets(presets_directory))}"
        )
    except json.JSONDecodeError as e:
        raise ConfigError(f"Preset {file_path} is not JSON: {e}") from e
    try:
        preset = Preset.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"Preset {file_path} is invalid: {e}") from e
    logger.info(f"Loaded preset '{preset.name}' from {file_path}")
    return preset


def available_presets(
    presets_directory: Path = PRESETS_DIRECTORY,
) -> List[str]:
    """Names of the presets found in ``presets_directory``."""
    return sorted(
        path.name[: -len("_preset.json")]
        for path in Path(presets_directory).glob("*_preset.json")
    )
