"""
Sampling checkers for the existence hypotheses.

The checkers can only falsify. Each report records its trial count and
seed, and the witness of the first failure in (trial, k) order. Runs are
deterministic given the seed.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from ordode.config import get_settings
from ordode.models import CheckReport, Witness
from ordode.services.fields import ContinuityKind, Field
from ordode.services.space import CoeffVec, OrderInterval

logger = logging.getLogger(__name__)

CONTINUOUS_TOL = 1e-9
CONTRACTION = 0.75


def _times(t_samples: Sequence[float]) -> list[float]:
    times = [float(t) for t in t_samples]
    if not times:
        raise ValueError("need at least one sample time")
    return times


def _first_bad(bad: np.ndarray) -> Optional[int]:
    idx = np.flatnonzero(bad)
    return int(idx[0]) if idx.size else None


def _read_coord(f: Field, k: int) -> Optional[int]:
    deps = sorted(f.depends_on(k))
    return deps[0] if deps else None


def _ordered_pair(
    rng: np.random.Generator, lo: np.ndarray, hi: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Random x in the box and y = x + beta (hi - x), so x <= y <= hi."""
    alpha = rng.random(lo.size)
    x = np.clip(alpha * lo + (1.0 - alpha) * hi, lo, hi)
    beta = rng.random(lo.size)
    return x, np.clip(x + beta * (hi - x), x, hi)


def check_monotone(
    f: Field,
    box: OrderInterval,
    t_samples: Sequence[float],
    trials: Optional[int] = None,
    rng_seed: int = 0,
    depth: Optional[int] = None,
) -> CheckReport:
    """Verify f_k(t, x) <= f_k(t, y) for sampled x <= y in the box.

    Trial 0 compares the box corners; later trials draw random ordered pairs.
    """
    trials = trials if trials is not None else get_settings().check_trials
    times = _times(t_samples)
    n = depth if depth is not None else box.depth
    lo, hi = box.materialize(n)
    rng = np.random.default_rng(rng_seed)

    for trial in range(trials + 1):
        t = times[trial % len(times)]
        xa, ya = (lo, hi) if trial == 0 else _ordered_pair(rng, lo, hi)
        fx = f.evaluate(t, box.lo.with_prefix(xa), n)
        fy = f.evaluate(t, box.lo.with_prefix(ya), n)
        k = _first_bad(fx > fy)
        if k is not None:
            witness = Witness(
                trial=trial,
                t=t,
                k=k,
                read=_read_coord(f, k),
                x=xa.tolist(),
                y=ya.tolist(),
                values={"f(x)": float(fx[k]), "f(y)": float(fy[k])},
            )
            return CheckReport(name="monotonicity", ok=False, trials=trial + 1, seed=rng_seed, witness=witness)
    return CheckReport(name="monotonicity", ok=True, trials=trials + 1, seed=rng_seed)


def check_bound(
    f: Field,
    box: OrderInterval,
    candidate_C: CoeffVec,
    t_samples: Sequence[float],
    trials: Optional[int] = None,
    rng_seed: int = 0,
    depth: Optional[int] = None,
) -> CheckReport:
    """Verify f_k(t, x) <= C_k; trials 0 and 1 are the box corners hi and lo."""
    trials = trials if trials is not None else get_settings().check_trials
    times = _times(t_samples)
    n = depth if depth is not None else box.depth
    lo, hi = box.materialize(n)
    bound = candidate_C.values(n)
    rng = np.random.default_rng(rng_seed)

    for trial in range(trials + 2):
        t = times[trial % len(times)]
        if trial == 0:
            xa = hi
        elif trial == 1:
            xa = lo
        else:
            alpha = rng.random(n)
            xa = alpha * lo + (1.0 - alpha) * hi
        fx = f.evaluate(t, box.lo.with_prefix(xa), n)
        k = _first_bad(fx > bound)
        if k is not None:
            witness = Witness(
                trial=trial,
                t=t,
                k=k,
                read=_read_coord(f, k),
                x=xa.tolist(),
                values={"f(x)": float(fx[k]), "C": float(bound[k])},
            )
            return CheckReport(name="bound", ok=False, trials=trial + 1, seed=rng_seed, witness=witness)
    return CheckReport(name="bound", ok=True, trials=trials + 2, seed=rng_seed)


def check_subsolution(
    f: Field,
    x_star: CoeffVec,
    x_hat: CoeffVec,
    grid,
    N: int,
) -> CheckReport:
    """Verify x_* <= x_hat + int_0^t f(s, x_*) ds at every node, exactly in t."""
    nodes = grid.nodes
    increments = np.array(
        [f.cell_integral(a, b, x_star, N) for a, b in zip(nodes[:-1], nodes[1:])]
    )
    rhs = np.vstack([np.zeros(N), np.cumsum(increments, axis=0)]) + x_hat.values(N)
    lhs = x_star.values(N)
    bad = lhs[None, :] > rhs
    if bad.any():
        j, k = (int(v) for v in np.argwhere(bad)[0])
        witness = Witness(
            node=j,
            t=float(nodes[j]),
            k=k,
            values={"x_star": float(lhs[k]), "rhs": float(rhs[j, k])},
        )
        return CheckReport(name="subsolution", ok=False, trials=len(nodes), witness=witness)
    return CheckReport(name="subsolution", ok=True, trials=len(nodes))


def _check_ladders(
    name: str,
    direction: int,
    f: Field,
    box: OrderInterval,
    t_samples: Sequence[float],
    trials: Optional[int],
    rng_seed: int,
    ladder_len: Optional[int],
    depth: Optional[int],
) -> CheckReport:
    """
    Geometric ladders x' - 2^-j d (direction -1) or x' + 2^-j d (direction +1).

    Each target x' is a random box point; where possible one read coordinate
    is placed exactly on a threshold of the field so the ladder ends on a jump.
    """
    settings = get_settings()
    trials = trials if trials is not None else settings.check_trials
    ladder_len = ladder_len if ladder_len is not None else settings.ladder_len
    if ladder_len < 3:
        raise ValueError("ladder_len must be at least 3")
    times = _times(t_samples)
    n = depth if depth is not None else box.depth
    lo, hi = box.materialize(n)
    tol = 0.0 if f.continuity == ContinuityKind.PIECEWISE_CONSTANT else CONTINUOUS_TOL
    rng = np.random.default_rng(rng_seed)

    for trial in range(trials):
        t = times[trial % len(times)]
        alpha = rng.random(n)
        target = alpha * lo + (1.0 - alpha) * hi
        k0 = int(rng.integers(n))
        j = _read_coord(f, k0)
        ths = f.thresholds(t, k0)
        pick = int(rng.integers(len(ths))) if ths else 0
        if j is not None and j < n and ths:
            th = ths[pick]
            room = lo[j] < th <= hi[j] if direction < 0 else lo[j] <= th < hi[j]
            if room:
                target[j] = th
        beta = rng.uniform(0.1, 1.0, n)
        gap = beta * (target - lo) if direction < 0 else beta * (hi - target)
        rung = target + direction * 2.0**-ladder_len * gap

        limit = f.evaluate(t, box.lo.with_prefix(target), n)
        last = f.evaluate(t, box.lo.with_prefix(rung), n)
        error = np.abs(last - limit)
        bad = error > tol
        if tol > 0 and bad.any():
            # steep but continuous components: error still halving along the ladder
            previous = target + direction * 2.0 ** -(ladder_len - 1) * gap
            before = np.abs(f.evaluate(t, box.lo.with_prefix(previous), n) - limit)
            bad &= error > CONTRACTION * before
        k = _first_bad(bad)
        if k is not None:
            witness = Witness(
                trial=trial,
                t=t,
                k=k,
                read=_read_coord(f, k),
                x=rung.tolist(),
                y=target.tolist(),
                values={"f(ladder)": float(last[k]), "f(limit)": float(limit[k])},
            )
            return CheckReport(name=name, ok=False, trials=trial + 1, seed=rng_seed, witness=witness)
    return CheckReport(name=name, ok=True, trials=trials, seed=rng_seed)


def check_left_continuity(
    f: Field,
    box: OrderInterval,
    t_samples: Sequence[float],
    trials: Optional[int] = None,
    rng_seed: int = 0,
    ladder_len: Optional[int] = None,
    depth: Optional[int] = None,
) -> CheckReport:
    """Ladders increasing to x'; f along the ladder must reach f(x')."""
    return _check_ladders(
        "left-continuity", -1, f, box, t_samples, trials, rng_seed, ladder_len, depth
    )


def check_right_continuity(
    f: Field,
    box: OrderInterval,
    t_samples: Sequence[float],
    trials: Optional[int] = None,
    rng_seed: int = 0,
    ladder_len: Optional[int] = None,
    depth: Optional[int] = None,
) -> CheckReport:
    return _check_ladders(
        "right-continuity", 1, f, box, t_samples, trials, rng_seed, ladder_len, depth
    )


def field_envelope(
    f: Field, box: OrderInterval, t: float, depth: Optional[int] = None
) -> tuple[np.ndarray, np.ndarray]:
    """(f(t, lo), f(t, hi)); sandwiches f(t, x) for monotone f and x in the box."""
    n = depth if depth is not None else box.depth
    lo, hi = box.materialize(n)
    return f.evaluate(t, box.lo.with_prefix(lo), n), f.evaluate(t, box.lo.with_prefix(hi), n)
