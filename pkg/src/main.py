from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from .config import RunConfig, load_settings
from .engine import COMMANDS, run
from .formatting import write_report
from .numerics import NumericalError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

# commands whose --ymin/--ymax/--n address the eigensolver window
SOLVER_COMMANDS = ("solve", "spectrum")


def _setup_logging(level: str) -> None:
    lvl = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(
        level=lvl,
        format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
    )


def _float_list(raw: Optional[str]) -> Optional[List[float]]:
    if raw is None:
        return None
    values = [part.strip() for part in raw.split(",") if part.strip()]
    if not values:
        raise ValueError(f"Expected a comma-separated list of numbers, got {raw!r}")
    return [float(v) for v in values]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Perturbatively deformed defects: profiles, masses, QM spectra"
    )
    parser.add_argument(
        "command",
        choices=[*COMMANDS, "sweep"],
        help="Which computation to run",
    )
    parser.add_argument("--family", help="Defect family: phi4, chi4 or sg")
    parser.add_argument("--k", help="Comma-separated deformation parameters, e.g. 0,0.5,1,2")
    parser.add_argument("--ymin", type=float)
    parser.add_argument("--ymax", type=float)
    parser.add_argument("--n", type=int, help="Number of grid nodes")
    parser.add_argument("--L", dest="L", help="Comma-separated box half-widths")
    parser.add_argument("--q-min", type=float)
    parser.add_argument("--q-max", type=float)
    parser.add_argument("--q-steps", type=int)
    parser.add_argument("--levels", type=int, help="Number of eigenpairs to compute")
    parser.add_argument("--tol", type=float, help="Absolute quadrature tolerance")
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--out", help="Output directory")
    parser.add_argument(
        "--config",
        default=None,
        help="Path to configuration.yaml",
    )
    parser.add_argument(
        "--log-level",
        default=None,
        help="Logging level (DEBUG, INFO, WARNING, ERROR)",
    )
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    ks = _float_list(args.k)
    grid_prefix = "bound_" if args.command in SOLVER_COMMANDS else ""
    return {
        "family": args.family,
        "k_values": ks,
        "continuum_k_values": ks,
        "spectrum_k_values": ks,
        f"{grid_prefix}y_min": args.ymin,
        f"{grid_prefix}y_max": args.ymax,
        f"{grid_prefix}n": args.n,
        "box_half_widths": _float_list(args.L),
        "q_min": args.q_min,
        "q_max": args.q_max,
        "q_steps": args.q_steps,
        "levels": args.levels,
        "tol": args.tol,
        "format": args.format,
        "out": args.out,
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        settings = load_settings(args.config)
        _setup_logging(args.log_level or settings.log_level)
        config = RunConfig.from_settings(settings, **_overrides(args))
    except (ValidationError, ValueError) as exc:
        _setup_logging("INFO")
        logger.error("Invalid configuration: %s", exc)
        return EXIT_CONFIG

    try:
        reports = run(args.command, config)
    except (NumericalError, ArithmeticError) as exc:
        logger.error("Numerical failure in %s: %s", args.command, exc)
        return EXIT_NUMERICAL
    except ValueError as exc:
        logger.error("Invalid input for %s: %s", args.command, exc)
        return EXIT_CONFIG

    try:
        for report in reports:
            write_report(report, config.format, config.out)
    except OSError as exc:
        logger.error("Cannot write output to %s: %s", config.out, exc)
        return EXIT_CONFIG

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
