"""
Ordode - command-line application

Checks the existence hypotheses of ordered ODE problems in weighted
sequence spaces, solves them by monotone fixed-point iteration, and runs
the built-in demonstrations.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from ordode.commands import ExitCode, check, demo, solve, sup
from ordode.config import configure_logging, get_settings
from ordode.errors import (
    EnclosureViolationError,
    FieldEvaluationError,
    GridMismatchError,
    HypothesisFailedError,
    MonotonicityViolationError,
    NotASolutionError,
    OrdodeError,
    ProblemFileError,
    TrajectoryFileError,
)

logger = logging.getLogger(__name__)


class OrdodeArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 64."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ExitCode.USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = OrdodeArgumentParser(
        prog="ordode",
        description="Monotone fixed-point solver for ordered ODEs in weighted sequence spaces",
    )
    parser.add_argument("--log-level", default=None, help="override ORDODE_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Register commands
    check.register(subparsers)
    solve.register(subparsers)
    demo.register(subparsers)
    sup.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    if args.log_level is not None:
        settings = settings.model_copy(update={"log_level": args.log_level})
    configure_logging(settings)

    try:
        return int(args.handler(args))
    except ProblemFileError as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.USAGE
    except HypothesisFailedError as e:
        for report in e.reports:
            print(report.summary())
        print(f"error: {e} (set solver.override_hypotheses to run anyway)", file=sys.stderr)
        return ExitCode.HYPOTHESES_FAILED
    except MonotonicityViolationError as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.HYPOTHESES_FAILED
    except (
        GridMismatchError,
        NotASolutionError,
        EnclosureViolationError,
        TrajectoryFileError,
        FieldEvaluationError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.DATA_ERROR
    except OrdodeError as e:
        logger.debug("unmapped error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.DATA_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
