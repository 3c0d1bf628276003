"""
`ordode solve PROBLEM [--out CSV]` - run the monotone iteration and write the trajectory.
"""

import argparse
from pathlib import Path

from ordode.commands import ExitCode
from ordode.services.problem_loader import get_problem_loader
from ordode.services.solver import solve
from ordode.services.trajectory_store import get_trajectory_store


def register(subparsers) -> None:
    parser = subparsers.add_parser("solve", help="Solve a problem by monotone fixed-point iteration")
    parser.add_argument("path", type=Path, help="problem file (JSON)")
    parser.add_argument("--out", type=Path, default=None, help="write the trajectory as CSV")
    parser.add_argument("--quiet", action="store_true", help="print nothing on success")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    problem = get_problem_loader().load(args.path)
    report = solve(problem)

    if args.out is not None:
        get_trajectory_store().write(report.trajectory, args.out)

    if not args.quiet or not report.converged:
        for check in report.hypothesis_reports:
            if not check.ok:
                print(check.summary())
        print(report.summary())
        if args.out is not None:
            print(f"trajectory written to {args.out}")

    return ExitCode.OK if report.converged else ExitCode.NOT_CONVERGED
