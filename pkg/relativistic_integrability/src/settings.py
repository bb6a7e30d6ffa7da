"""Numerical defaults of the toolkit and the validated run configuration.

The command line overrides individual fields. Models are frozen so a
configuration can be shared between worker processes and written to a run
manifest unchanged.
"""

import logging
import os
from pathlib import Path
from typing import Literal, Optional, Tuple

from pydantic import (BaseModel, ConfigDict, Field, field_validator,
                      model_validator)

from .errors import ConfigError

# Logger
logger = logging.getLogger(__name__)

WORKERS_ENV_VAR: str = "RELINT_WORKERS"


class Tolerances(BaseModel):
    """Tolerances of the algebraic and arithmetic stages."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    root_residual: float = Field(
        1e-12,
        gt=0,
        description="Relative residual accepted for a polished root.",
    )
    reconstruction: float = Field(
        1e-8, gt=0, description="Distance accepted between x and p/q."
    )
    max_denominator: int = Field(
        1_000_000, gt=0, description="Largest denominator tried."
    )
    darboux_residual: float = Field(
        1e-10, gt=0, description="Relative bound on |V'(d) - gamma d|."
    )
    imaginary_cut: float = Field(
        1e-8, gt=0, description="|Im(lambda)| above which it is complex."
    )
    kimura: float = Field(
        1e-9, gt=0, description="Integrality tolerance of exponents."
    )


class IntegratorSettings(BaseModel):
    """Settings of the adaptive Runge-Kutta integrator."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rtol: float = Field(1e-10, gt=0, description="Relative tolerance.")
    atol: float = Field(1e-10, gt=0, description="Absolute tolerance.")
    max_steps: int = Field(
        1_000_000, gt=0, description="Step budget per orbit."
    )
    first_step: Optional[float] = Field(
        None, gt=0, description="Initial step; automatic when unset."
    )
    divergence_radius: float = Field(
        1e6, gt=0, description="Max-norm of the state treated as divergence."
    )


class SectionSettings(BaseModel):
    """Settings of the Poincare-section extraction."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    crossing_tolerance: float = Field(
        1e-12, gt=0, description="Refined |q_plane| at a crossing."
    )
    energy_check: float = Field(
        1e-9, gt=0, description="Allowed energy offset of an initial state."
    )
    energy_drift_limit: float = Field(
        1e-7, gt=0, description="Allowed energy drift along an orbit."
    )
    plane_index: int = Field(
        0, ge=0, description="Coordinate whose zero set is the plane."
    )
    momentum_index: int = Field(
        0, ge=0, description="Momentum required to be positive."
    )


class SeedGrid(BaseModel):
    """Initial conditions placed on the section plane q_1 = 0."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    orbits: int = Field(12, gt=0, description="Number of orbits to seed.")
    margin: float = Field(
        0.02,
        gt=0,
        lt=0.5,
        description="Fraction of the allowed q_2 interval left unused.",
    )
    p2: float = Field(0.0, description="Fixed p_2 of every seed.")
    q2_range: Optional[Tuple[float, float]] = Field(
        None,
        description="Explicit q_2 interval; the allowed region when unset.",
    )

    @field_validator("q2_range")
    @classmethod
    def _ordered_range(cls, value):
        if value is not None and value[0] >= value[1]:
            raise ValueError(f"q2_range must be increasing, got {value}")
        return value


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_INTEGRATOR = IntegratorSettings()
DEFAULT_SECTION = SectionSettings()
DEFAULT_SEED_GRID = SeedGrid()


def worker_count() -> int:
    """Reads the worker count from the environment.

    Returns:
        The value of ``RELINT_WORKERS`` or 1 when it is unset.

    Raises:
        ConfigError: If the variable is not a positive integer.
    """
    raw_value = os.environ.get(WORKERS_ENV_VAR, "1")
    try:
        workers = int(raw_value)
    except ValueError as e:
        raise ConfigError(
            f"{WORKERS_ENV_VAR} must be an integer, got '{raw_value}'."
        ) from e
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV_VAR} must be >= 1, got {workers}.")
    logger.debug(f"Using {workers} worker(s)")
    return workers


class RunConfig(BaseModel):
    """Validated configuration of one command-line run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Literal["check", "jset", "jscan", "poincare", "simulate"]
    potential_path: Optional[Path] = Field(
        None, description="Potential file (JSON)."
    )
    preset: Optional[str] = Field(None, description="Named experiment.")
    kinetic: Literal["rel", "classical"] = "rel"
    tolerances: Tolerances = DEFAULT_TOLERANCES
    integrator: IntegratorSettings = DEFAULT_INTEGRATOR
    section: SectionSettings = DEFAULT_SECTION
    seed_grid: SeedGrid = DEFAULT_SEED_GRID
    output_path: Optional[Path] = Field(
        None, description="Result file; stdout when unset."
    )
    format: Optional[Literal["json", "csv", "svg", "text"]] = Field(
        None, description="Output format; per-command default when unset."
    )
    energy: Optional[float] = None
    t_end: float = Field(1000.0, gt=0, description="Integration time.")
    k: Optional[int] = None
    count: int = Field(7, ge=1, le=10_000)
    p_bound: int = Field(1000, ge=0, le=10_000_000)
    method: Literal["conic", "pell"] = "conic"
    samples: int = Field(1001, ge=2, description="Samples per orbit.")
    explain: bool = False

    @model_validator(mode="after")
    def _command_inputs(self):
        if self.command in ("jset", "jscan"):
            if not self.k:
                raise ValueError(f"{self.command} needs a non-zero --k")
        elif self.command == "check" and self.potential_path is None:
            raise ValueError("check needs --potential")
        elif self.potential_path is None and self.preset is None:
            raise ValueError(f"{self.command} needs --potential or --preset")
        path = self.potential_path
        if path is not None and not path.is_file():
            raise ValueError(
                f"potential_path: no such file '{self.potential_path}'"
            )
        if self.output_path is not None:
            parent = self.output_path.parent
            if not parent.is_dir():
                raise ValueError(
                    f"output_path: directory '{parent}' does not exist"
                )
        return self
