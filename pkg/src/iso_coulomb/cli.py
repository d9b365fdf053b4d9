"""Command-line surface.

Usage::

    iso-coulomb potential --l 1 --gamma 0.251,0.5,1,5,-1,0.25 --out fig.csv
    iso-coulomb verify --gamma 1,critical --format json
    iso-coulomb figures --out figures/

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
Failures print exactly one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import NoReturn

from pydantic import ValidationError

from iso_coulomb.config import (
    DEFAULT_VERIFICATION,
    GridConfig,
    OutputFormat,
    RunConfig,
    Subcommand,
)
from iso_coulomb.errors import InvalidParameterError, IsoCoulombError, NumericalError
from iso_coulomb.special.functions import critical_gamma
from iso_coulomb.workflow.commands import (
    cmd_figures,
    cmd_potential,
    cmd_spectrum,
    cmd_states,
    cmd_verify,
    write_document,
    write_table,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

_DEFAULT_GRID = GridConfig()


def _parse_gammas(text: str, l: int) -> list[float]:
    gammas: list[float] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if item.lower() == "critical":
            gammas.append(critical_gamma(l))
            continue
        try:
            gammas.append(float(item))
        except ValueError as e:
            raise InvalidParameterError(f"Not a gamma value: {item!r}.") from e
    if not gammas:
        raise InvalidParameterError("--gamma needs at least one value.")
    return gammas


class _Parser(argparse.ArgumentParser):
    """Usage errors follow the one-line JSON error contract."""

    def error(self, message: str) -> NoReturn:
        sys.exit(_fail("usage", EXIT_INVALID, message))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="iso-coulomb",
        description="Hydrogen-isospectral radial potentials and their numerical verification.",
    )
    parser.add_argument("subcommand", choices=[s.value for s in Subcommand])
    parser.add_argument("--l", type=int, default=1, help="factorized channel l >= 1")
    parser.add_argument("--gamma", default="1.0",
                        help="comma-separated gamma values; 'critical' for (2l)!(l/2)^(2l+1)")
    parser.add_argument("--r-min", type=float, default=_DEFAULT_GRID.r_min)
    parser.add_argument("--r-max", type=float, default=_DEFAULT_GRID.r_max)
    parser.add_argument("--points", type=int, default=_DEFAULT_GRID.n_points)
    parser.add_argument("--k", type=int, default=DEFAULT_VERIFICATION.k,
                        help="eigenvalue / state count")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat],
                        default=OutputFormat.CSV.value)
    parser.add_argument("--out", type=Path, default=None,
                        help="output file (figures: directory); default standard output")
    parser.add_argument("--allow-singular", action="store_true",
                        help="evaluate singular gammas away from their pole")
    parser.add_argument("--tolerance", type=float, default=DEFAULT_VERIFICATION.tolerance,
                        help="verify: absolute residual per eigenvalue")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.l < 1:
        raise InvalidParameterError(f"--l must be >= 1, got {args.l}.")
    if args.k < 1:
        raise InvalidParameterError(f"--k must be >= 1, got {args.k}.")
    return RunConfig(
        subcommand=Subcommand(args.subcommand),
        l=args.l,
        gammas=_parse_gammas(args.gamma, args.l),
        grid=GridConfig(r_min=args.r_min, r_max=args.r_max, n_points=args.points),
        k=args.k,
        output_format=OutputFormat(args.format),
        output_path=args.out,
        allow_singular=args.allow_singular,
        tolerance=args.tolerance,
    )


def run(config: RunConfig) -> None:
    """Execute one subcommand and write its output."""
    match config.subcommand:
        case Subcommand.POTENTIAL:
            write_table(cmd_potential(config), config.output_format, config.output_path)
        case Subcommand.STATES:
            write_table(cmd_states(config), config.output_format, config.output_path)
        case Subcommand.SPECTRUM:
            write_table(cmd_spectrum(config), config.output_format, config.output_path)
        case Subcommand.VERIFY:
            write_document(cmd_verify(config), config.output_path)
        case Subcommand.FIGURES:
            cmd_figures(config)


def _fail(kind: str, code: int, message: str) -> int:
    line = json.dumps({"error": kind, "exit_code": code, "message": " ".join(message.split())})
    print(line, file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
    )
    try:
        run(config_from_args(args))
    except ValidationError as e:
        return _fail(InvalidParameterError.kind, EXIT_INVALID, str(e))
    except InvalidParameterError as e:
        return _fail(e.kind, EXIT_INVALID, str(e))
    except NumericalError as e:
        return _fail(e.kind, EXIT_NUMERICAL, str(e))
    except IsoCoulombError as e:
        return _fail(e.kind, EXIT_NUMERICAL, str(e))
    except OSError as e:
        return _fail("io_error", EXIT_INVALID, str(e))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
