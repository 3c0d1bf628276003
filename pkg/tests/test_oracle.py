import numpy as np
import pytest

from ordode.services.fields import PiecewiseConstant
from ordode.services.oracle import dieudonne_mode_solve, scalar_heaviside_solve

SWITCH = PiecewiseConstant((0.5,), (1.0, -10.0))


def test_positive_shift_grows_linearly():
    sol = scalar_heaviside_solve(2.0, PiecewiseConstant.constant(1.0), 0.0, 1.0)
    assert sol(np.array([0.0, 0.5, 1.0])).tolist() == [0.0, 1.0, 2.0]
    assert sol.switch_times == ()


def test_zero_shift_falls_from_the_jump():
    # H(0) = -1, and u stays at or below 0 from then on
    sol = scalar_heaviside_solve(3.0, PiecewiseConstant.constant(0.0), 0.0, 1.0)
    assert sol(1.0) == -3.0
    assert sol(0.25) == -0.75


def test_switch_at_a_rho_breakpoint():
    sol = scalar_heaviside_solve(1.0, SWITCH, 0.0, 1.0)
    assert sol.switch_times == (0.5,)
    assert sol(np.array([0.25, 0.5, 0.75, 1.0])).tolist() == [0.25, 0.5, 0.25, 0.0]
    assert len(sol.segments) == 2


def test_solution_is_continuous_across_pieces():
    rho = PiecewiseConstant((0.2, 0.4, 0.6), (2.0, -5.0, 3.0, -0.1))
    sol = scalar_heaviside_solve(1.5, rho, 0.3, 1.0)
    for a, b in zip(sol.segments, sol.segments[1:]):
        assert a(a.t1) == pytest.approx(b(b.t0), abs=1e-15)


def test_zero_horizon():
    sol = scalar_heaviside_solve(1.0, PiecewiseConstant.constant(1.0), 4.0, 0.0)
    assert sol(0.0) == 4.0


@pytest.mark.parametrize("a, T", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
def test_invalid_oracle_arguments(a, T):
    with pytest.raises(ValueError):
        scalar_heaviside_solve(a, PiecewiseConstant.constant(1.0), 0.0, T)


def test_dieudonne_mode_examples():
    assert dieudonne_mode_solve(0, 0.0) == 0.0
    assert 1.0 <= dieudonne_mode_solve(0, 1.0, 10_000) <= 2.3
    with pytest.raises(ValueError):
        dieudonne_mode_solve(0, 1.0, 0)


def test_dieudonne_mode_is_monotone_in_time_and_forcing():
    times = [dieudonne_mode_solve(3, T, 4_000) for T in (0.25, 0.5, 1.0, 2.0)]
    assert times == sorted(times)
    modes = [dieudonne_mode_solve(k, 1.0, 4_000) for k in (0, 1, 10, 100)]
    assert modes == sorted(modes, reverse=True)


def test_small_forcing_still_reaches_a_quarter():
    assert dieudonne_mode_solve(999, 1.0) >= 0.249
