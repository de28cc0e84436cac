"""
Command line front end: orbit, transverse and check
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from algebra.errors import TransverseError
from cli.formatters import (
    build_orbit_report,
    build_transverse_report,
    check_text,
    orbit_latex,
    orbit_text,
    to_json,
    transverse_latex,
    transverse_text,
)
from models.config import CheckScope, ComplementKind, FormNormalization, OutputFormat, RunConfig, Settings, TensorChoice
from models.partition import Partition
from transverse.checks import run_checks
from transverse.complement import conormal_complement, im_ad_f
from transverse.dirac import compute_transverse
from transverse.fixtures import present, read_complement_file, run_complement_file
from transverse.orbit import centralizer, triplet_from_partition

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def configure_logging(level: str) -> None:
    """Single stderr sink; reports never go through the logger"""
    logger.remove()
    logger.add(sys.stderr, level=level, format="{time:HH:mm:ss} | {level: <8} | {name}:{function} - {message}")


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transverse-poisson",
        description="Transverse Poisson structures to nilpotent orbits of sl_n",
    )
    parser.add_argument("--log-level", default=settings.log_level, help="loguru sink level (PT_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    orbit = sub.add_parser("orbit", help="triplet, grading, centralizer and classification of an orbit")
    orbit.add_argument("n", type=int)
    orbit.add_argument("partition", help='Jordan type, e.g. "3,1"')
    orbit.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    orbit.add_argument("--output", type=Path, default=None)

    transverse = sub.add_parser("transverse", help="transverse Poisson tensor through the Dirac formula")
    transverse.add_argument("n", type=int)
    transverse.add_argument("partition")
    transverse.add_argument("--complement", default=ComplementKind.IMADF.value,
                            help="imadf, conormal or file:PATH")
    transverse.add_argument("--tensor", choices=[t.value for t in TensorChoice], default=TensorChoice.BOTH.value)
    transverse.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    transverse.add_argument("--form", choices=[f.value for f in FormNormalization], default=settings.form.value)
    transverse.add_argument("--output", type=Path, default=None)
    transverse.add_argument("--show-a", action="store_true", help="emit the A matrix")

    check = sub.add_parser("check", help="invariant suites and reference fixtures")
    check.add_argument("scope", nargs="?", choices=[s.value for s in CheckScope], default=CheckScope.ALL.value)
    check.add_argument("--max-n", type=int, default=5)
    check.add_argument("--seed", type=int, default=settings.seed)
    check.add_argument("--format", choices=[OutputFormat.TEXT.value, OutputFormat.JSON.value],
                       default=OutputFormat.TEXT.value)
    check.add_argument("--output", type=Path, default=None)
    return parser


def emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")
        logger.info("report written to {}", output)


def cmd_orbit(n: int, partition: str, output_format: OutputFormat, output: Optional[Path] = None) -> int:
    p = Partition.parse(partition, n).require_nonzero()
    t = triplet_from_partition(p)
    report = build_orbit_report(t, centralizer(t))
    if output_format is OutputFormat.JSON:
        emit(to_json(report), output)
    elif output_format is OutputFormat.LATEX:
        emit(orbit_latex(report), output)
    else:
        emit(orbit_text(report), output)
    return EXIT_OK


def cmd_transverse(config: RunConfig) -> int:
    """Exit 0 iff every verdict agrees with the flags of the complement"""
    if config.complement is ComplementKind.FILE:
        file_run = run_complement_file(read_complement_file(config.complement_path), config.form,
                                       config.n, config.partition)
        run, pres = file_run.run, file_run.presentation
    else:
        t = triplet_from_partition(config.partition.require_nonzero())
        z = centralizer(t)
        c = conormal_complement(t, z) if config.complement is ComplementKind.CONORMAL else im_ad_f(t)
        run = compute_transverse(t, z, c, config.form.scale(config.n))
        pres = present(run)
    report = build_transverse_report(run, pres, config.form, config.tensor, config.show_a)
    if config.output_format is OutputFormat.JSON:
        emit(to_json(report), config.output_path)
    elif config.output_format is OutputFormat.LATEX:
        emit(transverse_latex(report, pres, config.tensor, config.show_a), config.output_path)
    else:
        emit(transverse_text(report), config.output_path)
    if not report.consistent:
        logger.error("verdicts disagree with the complement flags")
        return EXIT_FAILED
    return EXIT_OK


def cmd_check(scope: CheckScope, max_n: int, settings: Settings, output_format: OutputFormat,
              output: Optional[Path] = None) -> int:
    summary = run_checks(scope, max_n, settings)
    emit(to_json(summary) if output_format is OutputFormat.JSON else check_text(summary), output)
    return EXIT_OK if summary.failed == 0 else EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    try:
        settings = Settings.from_env()
    except TransverseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    args = build_parser(settings).parse_args(argv)
    configure_logging(args.log_level.upper())
    try:
        if args.command == "orbit":
            return cmd_orbit(args.n, args.partition, OutputFormat(args.format), args.output)
        if args.command == "transverse":
            config = RunConfig.from_selector(
                args.n,
                Partition.parse(args.partition, args.n),
                args.complement,
                tensor=TensorChoice(args.tensor),
                output_format=OutputFormat(args.format),
                form=FormNormalization(args.form),
                output_path=args.output,
                show_a=args.show_a,
            )
            return cmd_transverse(config)
        settings = settings.model_copy(update={"seed": args.seed})
        return cmd_check(CheckScope(args.scope), args.max_n, settings, OutputFormat(args.format), args.output)
    except TransverseError as exc:
        logger.debug("{} raised", type(exc).__name__)
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
