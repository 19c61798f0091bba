"""Command-line front end.

Subcommands:
    table               comparison of the true twin counts with both predictors
    sweep-tmax          correction factor and prediction against the truncation degree
    sweep-theta         correction factor and prediction against the sieving exponent
    verify-identities   cross-check the evaluation routes of f(t;z)
    constants           2C2 partial product, Mertens constants, odd prime zeta values
    series              per-degree f(t;z) and partial sums for one sieving limit

Exit codes: 0 success, 1 invalid configuration or argument, 2 resource limit,
3 identity check failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from ._exceptions import DomainError, ResourceLimitError, SeriesSingularityError
from ._version import __version__
from .config import ModelConfig, OutputFormat, parse_x_value
from .experiment import (
    constants_report,
    render_records,
    render_table,
    run_table,
    series_profile,
    sieving_limit_sweep,
    truncation_sweep,
)
from .model import HLMode
from .primes import Backend
from .symmetric import IdentityReport, check_identities


EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RESOURCE = 2
EXIT_IDENTITY = 3

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def parse_t_range(text: str) -> range:
    """``"4"`` -> ``range(4, 5)``; ``"0..10"`` -> ``range(0, 11)`` (inclusive)."""
    low, _, high = text.partition("..")
    try:
        start = int(low)
        stop = int(high) if high else start
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer range like 0..10") from exc
    return range(start, stop + 1)


def parse_floats(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma separated list") from exc


def _add_model_options(parser: argparse.ArgumentParser, *, theta_list: bool = False) -> None:
    parser.add_argument("--x", help="comma separated bounds, 1e6 notation accepted")
    if theta_list:
        parser.add_argument("--theta", type=parse_floats, help="comma separated exponents")
    else:
        parser.add_argument("--theta", type=float, help="sieving exponent, z = floor(x**theta)")
    parser.add_argument("--backend", choices=[b.value for b in Backend])
    parser.add_argument("--hl-mode", choices=[m.value for m in HLMode])
    parser.add_argument("--hl-cutoff", type=parse_x_value)
    parser.add_argument("--workers", type=int)


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=[f.value for f in OutputFormat])
    parser.add_argument("--out", type=Path, help="output file (default: standard output)")
    parser.add_argument(
        "--log-level", type=str.upper, choices=LOG_LEVELS, default="WARNING", help="log threshold"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinsieve", description="Truncated sieve-series model of the twin prime count."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    table = commands.add_parser("table", help="reproduce the comparison table")
    _add_model_options(table)
    table.add_argument("--tmax", type=int)
    _add_output_options(table)

    sweep_tmax = commands.add_parser("sweep-tmax", help="sweep the truncation degree")
    _add_model_options(sweep_tmax)
    sweep_tmax.add_argument("--tmax", type=parse_t_range, default=range(0, 11))
    _add_output_options(sweep_tmax)

    sweep_theta = commands.add_parser("sweep-theta", help="sweep the sieving exponent")
    _add_model_options(sweep_theta, theta_list=True)
    sweep_theta.add_argument("--tmax", type=int)
    _add_output_options(sweep_theta)

    verify = commands.add_parser("verify-identities", help="cross-check the f(t;z) routes")
    verify.add_argument("--z", type=parse_x_value, default=100)
    verify.add_argument("--tmax", type=int, default=6)
    verify.add_argument("--tolerance", type=float, default=0.0)
    verify.add_argument("--backend", choices=[b.value for b in Backend])
    _add_output_options(verify)

    constants = commands.add_parser("constants", help="print the model constants")
    constants.add_argument("--hl-cutoff", type=parse_x_value)
    _add_output_options(constants)

    series = commands.add_parser("series", help="per-degree f(t;z) and partial sums")
    series.add_argument("--z", type=parse_x_value, default=31)
    series.add_argument("--tmax", type=int, default=10)
    series.add_argument("--backend", choices=[b.value for b in Backend])
    _add_output_options(series)
    return parser


def _config_from_args(args: argparse.Namespace, **overrides: object) -> ModelConfig:
    """Build a ModelConfig from the options actually given, leaving the rest at defaults."""
    options = {
        "x_values": getattr(args, "x", None),
        "theta": getattr(args, "theta", None),
        "t_max": getattr(args, "tmax", None),
        "backend": getattr(args, "backend", None),
        "hl_mode": getattr(args, "hl_mode", None),
        "hl_cutoff": getattr(args, "hl_cutoff", None),
        "output_format": getattr(args, "format", None),
        "workers": getattr(args, "workers", None),
    }
    options.update(overrides)
    return ModelConfig(**{key: value for key, value in options.items() if value is not None})


def _single_x(config: ModelConfig) -> int:
    if len(config.x_values) != 1:
        raise DomainError(f"Sweeps take a single x, got {config.x_values}.\n\n")
    return config.x_values[0]


def render_identity_report(report: IdentityReport, fmt: OutputFormat | str) -> str:
    records = [
        {"identity": name, "residual": float(residual), "passed": report.passed[name]}
        for name, residual in report.residuals.items()
    ]
    config = {
        "z": report.z,
        "t_max": report.t_max,
        "backend": report.backend.value,
        "tolerance": report.tolerance,
    }
    return render_records(records, config, fmt)


def verify_identities_cmd(
    z: int,
    t_max: int,
    tolerance: float = 0.0,
    backend: Backend | str | None = None,
    fmt: OutputFormat | str = OutputFormat.PRETTY,
) -> tuple[int, str]:
    """Run the identity checks and return the exit status with the rendered report."""
    report = check_identities(z, t_max, tolerance, backend)
    status = EXIT_OK if report.all_passed else EXIT_IDENTITY
    return status, render_identity_report(report, fmt)


def _run(args: argparse.Namespace) -> tuple[int, str]:
    if args.command == "table":
        config = _config_from_args(args)
        return EXIT_OK, render_table(run_table(config), config, config.output_format)

    if args.command == "sweep-tmax":
        config = _config_from_args(args, t_max=None, x_values=args.x or "1e6")
        points = truncation_sweep(_single_x(config), args.tmax, config)
        snapshot = config.snapshot() | {"t_range": [args.tmax.start, args.tmax.stop - 1]}
        return EXIT_OK, render_records(points, snapshot, config.output_format)

    if args.command == "sweep-theta":
        thetas = args.theta or [0.1, 0.2, 0.25, 1 / 3, 0.4, 0.5]
        config = _config_from_args(args, theta=None, x_values=args.x or "1e6")
        points = sieving_limit_sweep(_single_x(config), thetas, config)
        snapshot = config.snapshot() | {"theta_values": thetas}
        return EXIT_OK, render_records(points, snapshot, config.output_format)

    fmt = args.format or OutputFormat.PRETTY
    if args.command == "verify-identities":
        return verify_identities_cmd(args.z, args.tmax, args.tolerance, args.backend, fmt)

    if args.command == "constants":
        config = _config_from_args(args)
        report = constants_report(config.hl_cutoff)
        return EXIT_OK, render_records(report, {"hl_cutoff": config.hl_cutoff}, fmt)

    profile = series_profile(args.z, args.tmax, args.backend)
    config = {
        "z": profile.z,
        "t_max": args.tmax,
        "backend": profile.backend.value,
        "exact_numerator": profile.exact_numerator,
        "exact_denominator": profile.exact_denominator,
        "exact_value": profile.exact_value,
    }
    return EXIT_OK, render_records(profile.terms, config, fmt)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(message)s")
    try:
        status, text = _run(args)
    except (ValidationError, DomainError, SeriesSingularityError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        print(exc, file=sys.stderr)
        for note in getattr(exc, "__notes__", []):
            print(note, file=sys.stderr)
        return EXIT_RESOURCE

    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8", newline="\n")
    return status
