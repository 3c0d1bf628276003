"""
Reference solutions for single decoupled modes.

scalar_heaviside_solve integrates u' = a H(u + rho(t)) exactly by stepping
over the pieces of rho. Inside a piece rho is constant, and the sign of
u + rho cannot change: if u + rho > 0 then u grows and stays above -rho,
if u + rho <= 0 then u falls and stays at or below -rho. So the slope can
only switch at a breakpoint of rho.
"""

import math
from dataclasses import dataclass

import numpy as np

from ordode.services.fields import PiecewiseConstant


@dataclass(frozen=True)
class Segment:
    """u(t) = alpha + beta * t on [t0, t1]."""

    t0: float
    t1: float
    alpha: float
    beta: float

    def __call__(self, t):
        return self.alpha + self.beta * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class ScalarEventSolution:
    segments: tuple[Segment, ...]
    switch_times: tuple[float, ...]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        starts = np.array([s.t0 for s in self.segments])
        idx = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(self.segments) - 1)
        alphas = np.array([s.alpha for s in self.segments])[idx]
        betas = np.array([s.beta for s in self.segments])[idx]
        out = alphas + betas * t
        return float(out) if out.ndim == 0 else out


def scalar_heaviside_solve(a: float, rho: PiecewiseConstant, u0: float, T: float) -> ScalarEventSolution:
    if a <= 0:
        raise ValueError("amplitude a must be positive")
    if T < 0:
        raise ValueError("horizon must be nonnegative")
    segments = []
    switches = []
    u = float(u0)
    slope = None
    for t0, t1, r in rho.pieces(0.0, T):
        new_slope = a if u + r > 0 else -a
        if slope is not None and new_slope != slope:
            switches.append(t0)
        slope = new_slope
        segments.append(Segment(t0, t1, u - slope * t0, slope))
        u = u + slope * (t1 - t0)
    if not segments:
        segments.append(Segment(0.0, 0.0, u, 0.0))
    return ScalarEventSolution(tuple(segments), tuple(switches))


def dieudonne_mode_solve(k: int, T: float, fine_M: int = 100_000) -> float:
    """x_k(T) for x' = q(x) + 1/(k+1), x(0) = 0, by explicit Euler.

    The right side is nondecreasing in x and x increases, so Euler
    under-estimates: the result is a lower bound up to rounding.
    """
    if T <= 0:
        return 0.0
    if fine_M < 1:
        raise ValueError("fine_M must be positive")
    h = T / fine_M
    forcing = 1.0 / (k + 1)
    x = 0.0
    for _ in range(fine_M):
        x += h * (math.sqrt(x) + forcing)
    return x
