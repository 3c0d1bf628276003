"""
`ordode demo NAME` - built-in scenarios.

heaviside            decoupled Heaviside system, checked against the event oracle
dieudonne            modes of the Dieudonne system stay away from zero at t = 1
scalar-nonexistence  a non-monotone scalar field whose iteration oscillates
"""

import argparse
import sys

import numpy as np

from ordode.commands import ExitCode
from ordode.services.oracle import scalar_heaviside_solve
from ordode.services.problem_loader import bundled_problem, get_problem_loader
from ordode.services.solver import check_hypotheses, dieudonne_diagnostic, solve

DIEUDONNE_MODES = (0, 9, 99, 999)
DIEUDONNE_FINE_M = 100_000
DIEUDONNE_FLOOR = 0.249


def register(subparsers) -> None:
    parser = subparsers.add_parser("demo", help="Run a built-in scenario")
    parser.add_argument("name", help=", ".join(DEMOS))
    parser.set_defaults(handler=run)


def _heaviside() -> int:
    problem = get_problem_loader().load(bundled_problem("heaviside"))
    print("Decoupled system u_k' = (k+1) H(u_k + 1), u(0) = 0")
    print(f"N = {problem.N} coordinates, {problem.grid.M} cells on [0, {problem.T:g}], start x_star = -(k+1)")
    report = solve(problem)
    nodes = report.trajectory.grid.nodes
    values = report.trajectory.values
    exact = np.outer(nodes, np.arange(1, problem.N + 1))
    rho = problem.field.params.rho
    oracle_gap = max(
        float(np.max(np.abs(values[:, k] - scalar_heaviside_solve(k + 1.0, rho.for_coordinate(k), 0.0, problem.T)(nodes))))
        for k in range(problem.N)
    )
    print(f"iterations: {report.iterations} (every iterate above its predecessor: {report.monotone_certificate})")
    print(f"max |u_k(t_j) - (k+1) t_j| = {np.max(np.abs(values - exact)):.3e}")
    print(f"max gap to the event oracle = {oracle_gap:.3e}")
    print(f"coordinate residual max = {report.coordinate_residual_max:.3e}")
    print(f"enclosure [x_star, x_hat + t|C|] respected: {report.enclosure_certificate}")
    return ExitCode.OK if report.converged else ExitCode.NOT_CONVERGED


def _dieudonne() -> int:
    report = dieudonne_diagnostic(1.0, DIEUDONNE_MODES, DIEUDONNE_FINE_M)
    print("Decoupled modes x_k' = q(x_k) + 1/(k+1), x_k(0) = 0, q(s) = sqrt(max(s, 0))")
    print(f"{'k':>6}  {'x_k(1)':>12}")
    for k, value in report.per_mode_values.items():
        print(f"{k:>6}  {value:>12.6f}")
    print(f"inf over listed modes = {report.inf_value:.6f} (floor {DIEUDONNE_FLOOR})")
    print("Every mode reaches at least 1/4 by t = 1 however small its forcing, so the")
    print("coordinates of x(1) cannot tend to zero: no solution takes values in c0.")
    return ExitCode.OK if report.inf_value >= DIEUDONNE_FLOOR else ExitCode.NOT_CONVERGED


def _scalar_nonexistence() -> int:
    problem = get_problem_loader().load(bundled_problem("scalar_h"))
    print("Scalar field h(x) = 1 for x <= 1, -1 for x > 1, with x(0) = 1")
    for check in check_hypotheses(problem):
        print(check.summary())
    report = solve(problem)
    signs = "".join("+" if d > 0 else "-" if d < 0 else "0" for d in report.final_node_increments[:12])
    print(f"increment signs at t = T over the first iterations: {signs}")
    print(f"converged: {report.converged} after {report.iterations} iterations, {report.refines} refine(s)")
    print(f"coordinate residual max = {report.coordinate_residual_max:.3e}")
    print("The grid fixed point zig-zags around x = 1 with the cell width as amplitude;")
    print("its limit is the constant 1, which is not a solution.")
    return ExitCode.OK


DEMOS = {
    "heaviside": _heaviside,
    "dieudonne": _dieudonne,
    "scalar-nonexistence": _scalar_nonexistence,
}


def run(args: argparse.Namespace) -> int:
    demo = DEMOS.get(args.name)
    if demo is None:
        print(f"unknown demo {args.name!r}; choose one of: {', '.join(DEMOS)}", file=sys.stderr)
        return ExitCode.USAGE
    return demo()
