"""Main entry point of the relativistic integrability toolkit."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError
from src.commands import run
from src.dynamics import Kinetic
from src.errors import IntegrabilityToolError
from src.file_io import format_validation_error, load_manifest
from src.presets import available_presets, load_preset
from src.settings import (DEFAULT_INTEGRATOR, DEFAULT_SEED_GRID,
                          DEFAULT_TOLERANCES, RunConfig)

# Setup Logger
logging.basicConfig(
    level=logging.INFO,  # --verbose switches to DEBUG
    format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
logger = logging.getLogger(__name__)

# Load environment variables from .env file
load_dotenv()

EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    """Command-line interface with one subparser per command."""
    parser = argparse.ArgumentParser(
        description=(
            "Necessary conditions for the integrability of relativistic "
            "Hamiltonian systems with homogeneous potentials."
        )
    )
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument(
        "--replay", type=Path, help="Re-run the configuration of a manifest."
    )
    subparsers = parser.add_subparsers(dest="command")

    def add_output(subparser, formats):
        subparser.add_argument("--format", choices=formats)
        subparser.add_argument("--out", type=Path)

    check = subparsers.add_parser("check", help="Test a potential file.")
    check.add_argument("--potential", type=Path, required=True)
    check.add_argument("--explain", action="store_true")
    check.add_argument("--max-denominator", type=int)
    check.add_argument("--reconstruction-tolerance", type=float)
    add_output(check, ["json", "text"])

    jset = subparsers.add_parser("jset", help="Least elements of J+ u J-.")
    jset.add_argument("--k", type=int, required=True)
    jset.add_argument("--count", type=int, default=7)
    jset.add_argument("--method", choices=["conic", "pell"], default="conic")
    add_output(jset, ["json", "text", "csv"])

    jscan = subparsers.add_parser("jscan", help="Count integer f values.")
    jscan.add_argument("--k", type=int, required=True)
    jscan.add_argument("--pbound", type=int, default=1000)
    add_output(jscan, ["json", "text"])

    for name, formats in (
        ("poincare", ["csv", "svg", "json"]),
        ("simulate", ["csv", "json"]),
    ):
        dynamics = subparsers.add_parser(name)
        source = dynamics.add_mutually_exclusive_group(required=True)
        source.add_argument("--potential", type=Path)
        source.add_argument("--preset", choices=available_presets())
        dynamics.add_argument("--kinetic", choices=["rel", "classical"])
        dynamics.add_argument("--energy", type=float)
        dynamics.add_argument("--tend", type=float)
        dynamics.add_argument("--orbits", type=int)
        dynamics.add_argument("--rtol", type=float)
        dynamics.add_argument("--atol", type=float)
        if name == "simulate":
            dynamics.add_argument("--samples", type=int, default=1001)
        add_output(dynamics, formats)
    return parser


def _with_overrides(model, values: dict):
    """Re-validated copy of ``model`` with the flags that were given."""
    present = {key: val for key, val in values.items() if val is not None}
    return type(model).model_validate({**model.model_dump(), **present})


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Builds and validates the run configuration.

    Values of a preset fill every dynamics option not given on the command
    line, so the manifest of a preset run is fully explicit.
    """
    fields = {
        "command": args.command,
        "format": args.format,
        "output_path": args.out,
    }
    if args.command == "check":
        fields["potential_path"] = args.potential
        fields["explain"] = args.explain
        fields["tolerances"] = _with_overrides(
            DEFAULT_TOLERANCES,
            {
                "max_denominator": args.max_denominator,
                "reconstruction": args.reconstruction_tolerance,
            },
        )
    elif args.command == "jset":
        fields.update(k=args.k, count=args.count, method=args.method)
    elif args.command == "jscan":
        fields.update(k=args.k, p_bound=args.pbound)
    else:
        preset = load_preset(args.preset) if args.preset else None
        kinetic = args.kinetic or (
            "classical"
            if preset is not None and preset.kinetic is Kinetic.CLASSICAL
            else "rel"
        )
        energy, t_end, grid = args.energy, args.tend, DEFAULT_SEED_GRID
        if preset is not None:
            if energy is None:
                energy = preset.energy(
                    Kinetic.RELATIVISTIC
                    if kinetic == "rel"
                    else Kinetic.CLASSICAL
                )
            t_end = t_end if t_end is not None else preset.t_end
            grid = preset.seed_grid
        fields.update(
            potential_path=args.potential,
            preset=args.preset,
            kinetic=kinetic,
            energy=energy,
            seed_grid=_with_overrides(grid, {"orbits": args.orbits}),
            integrator=_with_overrides(
                DEFAULT_INTEGRATOR, {"rtol": args.rtol, "atol": args.atol}
            ),
        )
        if t_end is not None:
            fields["t_end"] = t_end
        if args.command == "simulate":
            fields["samples"] = args.samples
    return RunConfig(**fields)


def main(argv: Optional[List[str]] = None) -> int:
    """Parses the command line, runs the command and returns the exit
    code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        if args.replay is not None:
            config = load_manifest(args.replay).config
            logger.info(f"Replaying '{config.command}' from {args.replay}")
        elif args.command is None:
            parser.error("a command or --replay is required")
        else:
            config = config_from_args(args)
        result = run(config)
    except ValidationError as e:
        message = format_validation_error(e)
        logger.error(f"Invalid configuration: {message}")
        print(f"error: {message}", file=sys.stderr)
        return EXIT_ERROR
    except (IntegrabilityToolError, ValueError) as e:
        logger.error(f"Run failed: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if result.outputs:
        logger.info(f"Wrote {', '.join(result.outputs)}")
    else:
        sys.stdout.write(result.contents)
    return result.exit_code


if __name__ == "__main__":
    try:
        sys.exit(main())
    except Exception as e:
        logger.critical(f"Unexpected error occured: {e}", exc_info=True)
        sys.exit(EXIT_ERROR)
