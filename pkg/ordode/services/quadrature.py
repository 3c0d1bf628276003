"""
Time grids, trajectories, step functions and the integral operator

    (Phi u)(t) = x_hat + int_0^t f(s, u(s)) ds

realized on a grid with the state frozen at the left endpoint of each cell.
Freezing keeps Phi exactly monotone: if u <= v at every node then
Phi u <= Phi v at every node, with no rounding slack.
"""

import logging
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from ordode.errors import AnchorError, FieldEvaluationError, GridMismatchError
from ordode.models import CheckReport, Witness
from ordode.services.fields import Field
from ordode.services.space import CoeffVec, OrderInterval, SpaceSpec, seminorm

logger = logging.getLogger(__name__)


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Nodes 0 = t_0 < t_1 < ... < t_M = T."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = _frozen(self.nodes).reshape(-1)
        if nodes.size < 2:
            raise ValueError("a time grid needs at least one cell")
        if not np.all(np.isfinite(nodes)):
            raise ValueError("grid nodes must be finite")
        if nodes[0] != 0.0:
            raise ValueError("grid must start at t = 0")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, T: float, M: int) -> "TimeGrid":
        if T <= 0 or M < 1:
            raise ValueError("uniform grid needs T > 0 and M >= 1")
        return cls(np.linspace(0.0, T, M + 1))

    @property
    def T(self) -> float:
        return float(self.nodes[-1])

    @property
    def M(self) -> int:
        return self.nodes.size - 1

    @property
    def cells(self) -> np.ndarray:
        return np.diff(self.nodes)

    def refine(self) -> "TimeGrid":
        """Bisect every cell."""
        refined = np.empty(2 * self.M + 1)
        refined[0::2] = self.nodes
        refined[1::2] = 0.5 * (self.nodes[:-1] + self.nodes[1:])
        return TimeGrid(refined)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeGrid):
            return NotImplemented
        return np.array_equal(self.nodes, other.nodes)

    def __hash__(self) -> int:
        return hash(self.nodes.tobytes())

    def __repr__(self) -> str:
        return f"TimeGrid(M={self.M}, T={self.T:g})"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Coefficients u_k(t_j), j = 0..M, k < N; coordinates >= N follow the envelope's lower end."""

    grid: TimeGrid
    values: np.ndarray
    tail_envelope: Optional[OrderInterval] = None
    enclosed: bool = False

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 2 or values.shape[0] != self.grid.M + 1 or values.shape[1] < 1:
            raise ValueError(f"values must have shape ({self.grid.M + 1}, N) with N >= 1")
        if not np.all(np.isfinite(values)):
            raise ValueError("trajectory values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(
        cls,
        grid: TimeGrid,
        x: CoeffVec,
        N: int,
        envelope: Optional[OrderInterval] = None,
    ) -> "Trajectory":
        row = x.values(N)
        return cls(grid, np.tile(row, (grid.M + 1, 1)), envelope)

    @property
    def N(self) -> int:
        return self.values.shape[1]

    def state(self, j: int, frozen: Optional[CoeffVec] = None) -> CoeffVec:
        """u(t_j) as a vector; coordinates >= N are taken from `frozen`."""
        if frozen is None:
            frozen = self.tail_envelope.lo if self.tail_envelope is not None else CoeffVec.zero()
        return frozen.with_prefix(self.values[j])

    def with_values(self, values: np.ndarray, enclosed: bool = False) -> "Trajectory":
        return replace(self, values=values, enclosed=enclosed)

    def resample(self, grid: TimeGrid) -> "Trajectory":
        """Left-constant extension onto another grid over the same horizon."""
        if grid.T != self.grid.T:
            raise GridMismatchError(f"horizon {grid.T:g} != {self.grid.T:g}")
        idx = np.searchsorted(self.grid.nodes, grid.nodes, side="right") - 1
        idx = np.clip(idx, 0, self.grid.M)
        return Trajectory(grid, self.values[idx], self.tail_envelope)

    def __repr__(self) -> str:
        return f"Trajectory(M={self.grid.M}, N={self.N})"


# =============================================================================
# Step functions
# =============================================================================


@dataclass(frozen=True, eq=False)
class StepFn:
    """Finitely-valued function on [0, T]: values[c] on [breakpoints[c], breakpoints[c+1])."""

    breakpoints: np.ndarray
    values: tuple[CoeffVec, ...]

    def __post_init__(self):
        bp = _frozen(self.breakpoints).reshape(-1)
        if bp.size < 2 or np.any(np.diff(bp) <= 0) or bp[0] != 0.0:
            raise ValueError("step function breakpoints must increase from 0")
        if len(self.values) != bp.size - 1:
            raise ValueError("step function needs one value per cell")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", tuple(self.values))

    @classmethod
    def constant(cls, value: CoeffVec, T: float) -> "StepFn":
        return cls(np.array([0.0, T]), (value,))

    @property
    def T(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def cells(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def value_at(self, t: float) -> CoeffVec:
        c = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return self.values[min(max(c, 0), len(self.values) - 1)]

    def distinct_values(self) -> int:
        return len(set(self.values))

    def scale(self, c: float) -> "StepFn":
        return StepFn(self.breakpoints, tuple(v.scale(c) for v in self.values))

    def combine(self, alpha: float, other: "StepFn", beta: float) -> "StepFn":
        """alpha * self + beta * other on the common refinement."""
        if self.T != other.T:
            raise GridMismatchError("step functions live on different horizons")
        bp = np.union1d(self.breakpoints, other.breakpoints)
        mids = 0.5 * (bp[:-1] + bp[1:])
        values = tuple(
            self.value_at(m).scale(alpha) + other.value_at(m).scale(beta) for m in mids
        )
        return StepFn(bp, values)

    def __add__(self, other: "StepFn") -> "StepFn":
        return self.combine(1.0, other, 1.0)


def step_integral(s: StepFn) -> CoeffVec:
    """Sum over cells of value * cell length."""
    total = CoeffVec.zero()
    for length, value in zip(s.cells, s.values):
        total = total + value.scale(float(length))
    return total


@dataclass(frozen=True)
class ScalarStep:
    """Real-valued step function used as an integrable dominator."""

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def value_at(self, t: float) -> float:
        c = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return self.values[min(max(c, 0), len(self.values) - 1)]

    @classmethod
    def constant(cls, value: float, T: float) -> "ScalarStep":
        return cls((0.0, T), (value,))


def dominated_convergence_check(
    s_seq: Sequence[StepFn],
    limit: StepFn,
    dominators: Mapping[int, ScalarStep],
    space: SpaceSpec,
    tol: Optional[float] = None,
    tail_tol: Optional[float] = None,
) -> CheckReport:
    """
    Grid-level harness: the integral gaps |int s_n - int limit|_i must not
    increase along the sequence (and end below tol when given), and every
    |s_n(t)|_i must stay below dominator_i(t).
    """
    limit_integral = step_integral(limit)
    gaps: dict[str, list[float]] = {}
    witness = None
    for i, dominator in sorted(dominators.items()):
        series = []
        for n, s in enumerate(s_seq):
            series.append(seminorm(step_integral(s) - limit_integral, i, space, tail_tol).total)
            if witness is not None:
                continue
            cuts = np.union1d(s.breakpoints, np.asarray(dominator.breakpoints, dtype=float))
            for m in 0.5 * (cuts[:-1] + cuts[1:]):
                size = seminorm(s.value_at(m), i, space, tail_tol).total
                bound = dominator.value_at(m)
                if size > bound:
                    witness = Witness(trial=n, t=float(m), k=i, values={"norm": size, "dominator": bound})
                    break
        gaps[f"gap_i{i}"] = series

    decreasing = all(all(b <= a for a, b in zip(g, g[1:])) for g in gaps.values())
    below = tol is None or all(g[-1] <= tol for g in gaps.values() if g)
    ok = witness is None and decreasing and below
    problems = []
    if witness is not None:
        problems.append("dominator violated")
    if not decreasing:
        problems.append("gaps not decreasing")
    if not below:
        problems.append("final gap above tolerance")
    return CheckReport(
        name="dominated-convergence",
        ok=ok,
        trials=len(s_seq),
        witness=witness,
        detail="; ".join(problems),
        metrics=gaps,
    )


# =============================================================================
# The integral operator
# =============================================================================


def phi_apply(f: Field, x_hat: CoeffVec, u: Trajectory) -> Trajectory:
    """Phi u on u's grid; all cell integrals read the stored u, never partial updates."""
    nodes = u.grid.nodes
    N = u.N
    increments = np.empty((u.grid.M, N))
    for l in range(u.grid.M):
        try:
            cell = f.cell_integral(float(nodes[l]), float(nodes[l + 1]), u.state(l), N)
        except FieldEvaluationError as exc:
            raise FieldEvaluationError(exc.reason, node=l, coordinate=exc.coordinate) from exc
        except (AnchorError, ValueError, ArithmeticError) as exc:
            raise FieldEvaluationError(str(exc), node=l) from exc
        bad = np.flatnonzero(~np.isfinite(cell))
        if bad.size:
            raise FieldEvaluationError("non-finite field value", node=l, coordinate=int(bad[0]))
        increments[l] = cell
    values = np.empty((u.grid.M + 1, N))
    values[0] = x_hat.values(N)
    values[1:] = values[0] + np.cumsum(increments, axis=0)
    return Trajectory(u.grid, values, u.tail_envelope)
