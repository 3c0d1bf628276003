"""
Trajectory CSV persistence.

Format: UTF-8, LF line endings, header `t,u0,u1,...,u{N-1}`, one row per
grid node, every number written with 17 significant digits so that floats
round-trip exactly.
"""

import logging
from pathlib import Path
from typing import Optional

import numpy as np

from ordode.errors import GridMismatchError, TrajectoryFileError
from ordode.services.quadrature import TimeGrid, Trajectory
from ordode.services.solver import Problem

logger = logging.getLogger(__name__)


def csv_header(N: int) -> str:
    return ",".join(["t"] + [f"u{k}" for k in range(N)])


class TrajectoryStore:
    """Writes and reads trajectory CSV files."""

    def write(self, traj: Trajectory, path: Path) -> None:
        path = Path(path)
        if path.parent != Path("."):
            path.parent.mkdir(parents=True, exist_ok=True)
        data = np.column_stack([traj.grid.nodes, traj.values])
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            np.savetxt(
                fh,
                data,
                fmt="%.17g",
                delimiter=",",
                header=csv_header(traj.N),
                comments="",
                newline="\n",
            )
        logger.info("Wrote %d nodes x %d coordinates to %s", data.shape[0], traj.N, path)

    def read(self, path: Path) -> tuple[TimeGrid, np.ndarray]:
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().strip()
        columns = header.split(",")
        if len(columns) < 2 or header != csv_header(len(columns) - 1):
            raise TrajectoryFileError(str(path), f"unexpected header {header!r}")
        try:
            data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, encoding="utf-8")
        except ValueError as e:
            raise TrajectoryFileError(str(path), str(e)) from e
        if data.shape[1] != len(columns):
            raise TrajectoryFileError(str(path), "row width does not match header")
        try:
            grid = TimeGrid(data[:, 0])
        except ValueError as e:
            raise TrajectoryFileError(str(path), str(e)) from e
        return grid, data[:, 1:]

    def load(self, path: Path, problem: Problem) -> Trajectory:
        """Read a trajectory and attach the problem's enclosure as tail envelope."""
        grid, values = self.read(path)
        if values.shape[1] != problem.N:
            raise GridMismatchError(f"{path} has N={values.shape[1]}, problem N={problem.N}")
        if grid.T != problem.T:
            raise GridMismatchError(f"{path} ends at t={grid.T:g}, problem T={problem.T:g}")
        return Trajectory(grid, values, problem.envelope)


# Global instance
_trajectory_store: Optional[TrajectoryStore] = None


def get_trajectory_store() -> TrajectoryStore:
    """Get the global trajectory store instance."""
    global _trajectory_store
    if _trajectory_store is None:
        _trajectory_store = TrajectoryStore()
    return _trajectory_store
