import numpy as np
import pytest

from ordode.errors import GridMismatchError, TrajectoryFileError
from ordode.services.quadrature import TimeGrid, Trajectory
from ordode.services.solver import residual, solve
from ordode.services.trajectory_store import TrajectoryStore, csv_header


@pytest.fixture
def store():
    return TrajectoryStore()


def test_header():
    assert csv_header(3) == "t,u0,u1,u2"


def test_file_layout(store, tmp_path):
    u = Trajectory(TimeGrid.uniform(1.0, 2), np.array([[0.0], [1.0], [2.0]]))
    path = tmp_path / "u.csv"
    store.write(u, path)
    assert path.read_bytes() == b"t,u0\n0,0\n0.5,1\n1,2\n"


def test_floats_survive_a_round_trip(store, tmp_path):
    rng = np.random.default_rng(3)
    grid = TimeGrid.uniform(0.7, 33)
    values = rng.normal(0.0, 1e3, (34, 5)) * 10.0 ** rng.integers(-20, 20, (34, 5))
    path = tmp_path / "nested" / "u.csv"
    store.write(Trajectory(grid, values), path)
    read_grid, read_values = store.read(path)
    np.testing.assert_array_equal(read_grid.nodes, grid.nodes)
    np.testing.assert_array_equal(read_values, values)


def test_wrong_truncation_is_a_grid_mismatch(store, tmp_path, heaviside_problem):
    path = tmp_path / "u.csv"
    store.write(Trajectory(heaviside_problem.grid, np.zeros((257, 3))), path)
    with pytest.raises(GridMismatchError, match="N=3"):
        store.load(path, heaviside_problem)


def test_wrong_horizon_is_a_grid_mismatch(store, tmp_path, heaviside_problem):
    path = tmp_path / "u.csv"
    store.write(Trajectory(TimeGrid.uniform(2.0, 4), np.zeros((5, 16))), path)
    with pytest.raises(GridMismatchError):
        store.load(path, heaviside_problem)


@pytest.mark.parametrize(
    "text",
    [
        "time,u0\n0,0\n1,1\n",
        "t,u0\n0,zero\n1,1\n",
        "t,u0\n0,0,0\n1,1,1\n",
        "t,u0\n0,0\n0,1\n",
    ],
)
def test_malformed_files(store, tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(TrajectoryFileError):
        store.read(path)


def test_loaded_solution_keeps_its_residual(store, tmp_path, heaviside_problem):
    u = solve(heaviside_problem).trajectory
    path = tmp_path / "u.csv"
    store.write(u, path)
    loaded = store.load(path, heaviside_problem)
    assert loaded.tail_envelope is not None
    assert residual(heaviside_problem, loaded).coord_max == residual(heaviside_problem, u).coord_max
