"""
Monotone fixed-point iteration for x' = f(t, x), x(0) = x_hat.

Starting from the constant trajectory u0 = x_star, the solver iterates
u <- Phi(u). For a monotone field and a subsolution x_star, the iterates
increase coordinatewise at every node and stay in the enclosure
[x_star, x_hat + t |C|]. Both facts are checked exactly on every iterate.
"""

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from ordode.config import Settings, get_settings
from ordode.errors import (
    EmptySupremumError,
    EnclosureViolationError,
    GridMismatchError,
    HypothesisFailedError,
    MonotonicityViolationError,
    NoUpperBoundError,
    NotASolutionError,
    ProblemDefinitionError,
)
from ordode.models import (
    CheckReport,
    DieudonneReport,
    ResidualReport,
    SolveReport,
    WeakDerivativeReport,
)
from ordode.services.checks import (
    check_bound,
    check_left_continuity,
    check_monotone,
    check_subsolution,
)
from ordode.services.fields import Field
from ordode.services.oracle import dieudonne_mode_solve
from ordode.services.quadrature import TimeGrid, Trajectory, phi_apply
from ordode.services.space import (
    CoeffVec,
    OrderInterval,
    SpaceSpec,
    absolute,
    coordwise_sup,
    frechet_metric,
    leq,
)

logger = logging.getLogger(__name__)

RESIDUAL_INDICES = range(1, 9)
MAX_LOGGED_WITNESSES = 10


@dataclass(frozen=True)
class Problem:
    """An initial value problem with its enclosure data and solver limits."""

    space: SpaceSpec
    field: Field
    x_hat: CoeffVec
    x_star: CoeffVec
    bound_C: CoeffVec
    T: float
    N: int
    grid: TimeGrid
    tol_residual: float = 1e-12
    max_iters: int = 100
    max_refines: int = 0
    override_hypotheses: bool = False
    rng_seed: int = 0
    check_trials: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        if self.T <= 0:
            raise ProblemDefinitionError("T must be positive")
        if self.N < 1:
            raise ProblemDefinitionError("N must be at least 1")
        if self.tol_residual <= 0:
            raise ProblemDefinitionError("tol_residual must be positive")
        if self.max_iters < 1 or self.max_refines < 0:
            raise ProblemDefinitionError("iteration limits must be nonnegative (max_iters >= 1)")
        if self.grid.T != self.T:
            raise ProblemDefinitionError(f"grid ends at {self.grid.T:g}, expected T = {self.T:g}")
        for label, vec in (("x_hat", self.x_hat), ("x_star", self.x_star), ("C", self.bound_C)):
            if not vec.tail.is_exact:
                raise ProblemDefinitionError(f"{label} must have an exact tail")
            if vec.tail.lower is not None:
                self.space.witness(vec.tail.lower)
        verdict = leq(self.x_star, self.upper_bound)
        if not verdict.holds:
            raise ProblemDefinitionError(
                f"x_star is not below x_hat + T|C| ({verdict.reason})"
            )

    @cached_property
    def upper_bound(self) -> CoeffVec:
        """x_hat + T |C|"""
        return self.x_hat + absolute(self.bound_C).scale(self.T)

    @cached_property
    def envelope(self) -> OrderInterval:
        return OrderInterval(self.x_star, self.upper_bound)

    def ceiling(self, grid: TimeGrid) -> np.ndarray:
        """x_hat + t_j |C| at every node, first N coordinates."""
        c = absolute(self.bound_C).values(self.N)
        return self.x_hat.values(self.N)[None, :] + grid.nodes[:, None] * c[None, :]

    def with_grid(self, grid: TimeGrid) -> "Problem":
        return replace(self, grid=grid)

    def sample_times(self, count: int = 8) -> np.ndarray:
        left = self.grid.nodes[:-1]
        picks = np.unique(np.linspace(0, left.size - 1, min(count, left.size)).astype(int))
        return left[picks]


def check_hypotheses(
    p: Problem, trials: Optional[int] = None, rng_seed: Optional[int] = None
) -> list[CheckReport]:
    """Monotonicity, bound, subsolution and left-continuity checks for p."""
    trials = trials if trials is not None else p.check_trials
    seed = rng_seed if rng_seed is not None else p.rng_seed
    box = p.envelope
    times = p.sample_times()
    return [
        check_monotone(p.field, box, times, trials, seed, depth=p.N),
        check_bound(p.field, box, p.bound_C, times, trials, seed, depth=p.N),
        check_subsolution(p.field, p.x_star, p.x_hat, p.grid, p.N),
        check_left_continuity(p.field, box, times, trials, seed, depth=p.N),
    ]


def _plateau(history: Sequence[float], tol: float, settings: Settings) -> bool:
    window = settings.plateau_window
    if len(history) < window:
        return False
    recent = history[-window:]
    low, high = min(recent), max(recent)
    return low > tol and high - low <= settings.plateau_rtol * high


def _enclosed(p: Problem, u: Trajectory) -> bool:
    lower = p.x_star.values(p.N)
    return bool(np.all(u.values >= lower[None, :]) and np.all(u.values <= p.ceiling(u.grid)))


def _residual_from(p: Problem, u: Trajectory, image: Trajectory) -> ResidualReport:
    diff = image.values - u.values
    per_index = [
        max(p.space.prefix_seminorm(row, i) for row in diff) for i in RESIDUAL_INDICES
    ]
    zero = CoeffVec.zero()
    metric = max(frechet_metric(CoeffVec(row), zero, p.space).value for row in diff)
    return ResidualReport(
        per_index=per_index,
        coord_max=float(np.abs(diff).max()),
        metric=metric,
    )


def _on_problem_grid(p: Problem, u: Trajectory) -> Trajectory:
    if u.grid != p.grid:
        raise GridMismatchError(f"trajectory has {u.grid.M} cells, problem grid {p.grid.M}")
    if u.N != p.N:
        raise GridMismatchError(f"trajectory has N={u.N}, problem N={p.N}")
    if u.tail_envelope is None:
        u = replace(u, tail_envelope=p.envelope)
    return u


def residual(p: Problem, u: Trajectory) -> ResidualReport:
    """Seminorms (i = 1..8) and max coordinate of Phi u - u over the nodes."""
    u = _on_problem_grid(p, u)
    return _residual_from(p, u, phi_apply(p.field, p.x_hat, u))


def solve(p: Problem) -> SolveReport:
    settings = get_settings()
    reports = check_hypotheses(p)
    failed = [r.name for r in reports if not r.ok]
    if failed:
        if not p.override_hypotheses:
            raise HypothesisFailedError(reports)
        logger.warning("Hypothesis checks failed (%s); continuing under override", ", ".join(failed))

    beyond = p.field.reads_beyond(p.N)
    for k, j in beyond[:MAX_LOGGED_WITNESSES]:
        logger.warning("Truncation: coordinate %d reads coordinate %d >= N=%d, held at x_star", k, j, p.N)
    if len(beyond) > MAX_LOGGED_WITNESSES:
        logger.warning("Truncation: %d further reads beyond N", len(beyond) - MAX_LOGGED_WITNESSES)

    envelope = p.envelope
    grid = p.grid
    u = Trajectory.constant(grid, p.x_star, p.N, envelope)
    image: Optional[Trajectory] = None
    monotone_ok = True
    enclosure_ok = _enclosed(p, u)
    history: list[float] = []
    final_increments: list[float] = []
    window_start = 0
    iterations = 0
    refines = 0
    converged = False

    while iterations < p.max_iters:
        v = image if image is not None else phi_apply(p.field, p.x_hat, u)
        image = None
        iterations += 1
        diff = v.values - u.values
        drops = np.argwhere(diff < 0)
        if drops.size:
            j, k = (int(c) for c in drops[0])
            if not p.override_hypotheses:
                raise MonotonicityViolationError(iterations, j, k, float(-diff[j, k]))
            monotone_ok = False
        increment = float(np.abs(diff).max())
        history.append(increment)
        last = diff[-1]
        final_increments.append(float(last[np.argmax(np.abs(last))]))
        logger.debug("Iteration %d: max increment %.3e", iterations, increment)

        if increment <= p.tol_residual:
            converged = True
            image = v
            break
        enclosure_ok = enclosure_ok and _enclosed(p, v)
        u = v

        if refines < p.max_refines and _plateau(history[window_start:], p.tol_residual, settings):
            grid = grid.refine()
            refines += 1
            seed = u.resample(grid)
            seeded_image = phi_apply(p.field, p.x_hat, seed)
            if np.all(seeded_image.values >= seed.values):
                logger.warning("Increments stalled; refined grid to %d cells", grid.M)
                u, image = seed, probe
            else:
                logger.warning(
                    "Increments stalled; refined grid to %d cells and restarted from x_star "
                    "(interpolated iterate is not below its image)",
                    grid.M,
                )
                u = Trajectory.constant(grid, p.x_star, p.N, envelope)
                enclosure_ok = enclosure_ok and _enclosed(p, u)
            window_start = len(history)

    final = p.with_grid(grid)
    if image is None:
        image = phi_apply(p.field, p.x_hat, u)
    report = _residual_from(final, u, image)
    invariant = bool(
        np.all(u.values >= p.x_star.values(p.N)[None, :]) and np.all(image.values >= u.values)
    )
    radius = [envelope.truncation_radius(p.N, i, p.space) for i in RESIDUAL_INDICES]

    return SolveReport(
        trajectory=u.with_values(u.values, enclosed=enclosure_ok),
        iterations=iterations,
        refines=refines,
        residual_per_index=report.per_index,
        coordinate_residual_max=report.coord_max,
        monotone_certificate=monotone_ok,
        enclosure_certificate=enclosure_ok,
        invariant_set_certificate=invariant,
        converged=converged,
        hypothesis_reports=reports,
        increment_history=history,
        final_node_increments=final_increments,
        metric_residual=report.metric,
        truncation_radius=radius,
        truncation_witnesses=beyond,
    )


def sup_solutions(p: Problem, sols: Sequence[Trajectory]) -> tuple[Trajectory, ResidualReport]:
    """Nodewise coordinatewise supremum of verified solutions, with its residual."""
    if not sols:
        raise EmptySupremumError()
    grid = sols[0].grid
    for s in sols[1:]:
        if s.grid != grid or s.N != sols[0].N:
            raise GridMismatchError("solutions do not share a grid and truncation")
    if grid.T != p.T:
        raise GridMismatchError(f"solutions end at {grid.T:g}, problem at T = {p.T:g}")
    pg = p.with_grid(grid)
    checked = []
    for position, s in enumerate(sols):
        s = _on_problem_grid(pg, s)
        r = residual(pg, s)
        if r.coord_max > p.tol_residual:
            raise NotASolutionError(position, r.coord_max, p.tol_residual)
        checked.append(s)

    upper = p.upper_bound
    rows = []
    for j in range(grid.M + 1):
        states = [s.state(j, p.x_star) for s in checked]
        try:
            rows.append(coordwise_sup(states, upper).values(p.N))
        except NoUpperBoundError as e:
            raise EnclosureViolationError(e.position, j, float(grid.nodes[j])) from e
    out = Trajectory(grid, np.array(rows), pg.envelope)
    return out, residual(pg, out)


def weak_derivative_diagnostic(p: Problem, u: Trajectory, tol: float = 1e-8) -> WeakDerivativeReport:
    """Central differences of u against f(t_j, u(t_j)) at interior nodes.

    A node is excluded for component k when f_k differs between t_j and
    either neighbour, i.e. the field switches inside an adjacent cell.
    """
    nodes = u.grid.nodes
    N = u.N
    values = np.array(
        [p.field.evaluate(float(t), u.state(j, p.x_star), N) for j, t in enumerate(nodes)]
    )
    compared = ok = excluded = excluded_nodes = 0
    for j in range(1, u.grid.M):
        switching = (values[j - 1] != values[j]) | (values[j + 1] != values[j])
        if switching.any():
            excluded_nodes += 1
        central = (u.values[j + 1] - u.values[j - 1]) / (nodes[j + 1] - nodes[j - 1])
        keep = ~switching
        excluded += int(switching.sum())
        compared += int(keep.sum())
        ok += int((np.abs(central - values[j]) <= tol)[keep].sum())
    return WeakDerivativeReport(
        fraction_ok=ok / compared if compared else 1.0,
        excluded_nodes=excluded_nodes,
        excluded_comparisons=excluded,
        compared=compared,
        tol=tol,
    )


def dieudonne_diagnostic(
    T: float = 1.0, modes: Sequence[int] = (0, 9, 99, 999), fine_M: int = 100_000
) -> DieudonneReport:
    """x_k(T) for decoupled modes x' = q(x) + 1/(k+1); their infimum stays away from 0."""
    values = {int(k): dieudonne_mode_solve(int(k), T, fine_M) for k in modes}
    return DieudonneReport(
        T=T,
        fine_M=fine_M,
        per_mode_values=values,
        inf_value=min(values.values()) if values else 0.0,
    )
