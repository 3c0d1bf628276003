"""
`ordode check PROBLEM` - run the hypothesis checkers and print one verdict per check.
"""

import argparse
from pathlib import Path

from ordode.commands import ExitCode
from ordode.services.problem_loader import get_problem_loader
from ordode.services.solver import check_hypotheses


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="Check monotonicity, bound, subsolution and left-continuity")
    parser.add_argument("path", type=Path, help="problem file (JSON)")
    parser.add_argument("--seed", type=int, default=None, help="override solver.rng_seed")
    parser.add_argument("--trials", type=int, default=None, help="override the number of random trials")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    problem = get_problem_loader().load(args.path)
    reports = check_hypotheses(problem, trials=args.trials, rng_seed=args.seed)
    for report in reports:
        print(report.summary())
    if all(r.ok for r in reports):
        return ExitCode.OK
    return ExitCode.HYPOTHESES_FAILED
