"""
`ordode sup A.csv B.csv ... --problem PROBLEM [--out CSV]` - supremum of verified solutions.
"""

import argparse
from pathlib import Path

from ordode.commands import ExitCode
from ordode.services.problem_loader import get_problem_loader
from ordode.services.solver import sup_solutions
from ordode.services.trajectory_store import get_trajectory_store


def register(subparsers) -> None:
    parser = subparsers.add_parser("sup", help="Coordinatewise supremum of solution trajectories")
    parser.add_argument("paths", type=Path, nargs="+", help="solution CSV files")
    parser.add_argument("--problem", type=Path, required=True, help="problem file the solutions belong to")
    parser.add_argument("--out", type=Path, default=None, help="write the supremum as CSV")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    problem = get_problem_loader().load(args.problem)
    store = get_trajectory_store()
    solutions = [store.load(path, problem) for path in args.paths]
    result, report = sup_solutions(problem, solutions)

    if args.out is not None:
        store.write(result, args.out)

    print(f"supremum of {len(solutions)} solution(s) on {result.grid.M} cells")
    print(f"coordinate residual max: {report.coord_max:.3e} (tolerance {problem.tol_residual:.3e})")
    if report.coord_max <= problem.tol_residual:
        return ExitCode.OK
    return ExitCode.NOT_CONVERGED
