"""
Right-hand sides f(t, x) exposed coordinatewise.

Every field declares which coordinates each component reads, whether it is
monotone and order-left-continuous, and (optionally) a uniform bound C.
Components are evaluated in batches: `evaluate(t, x, n)` returns
f_0..f_{n-1} as a numpy array.
"""

import bisect
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from ordode.errors import AnchorError, FieldEvaluationError
from ordode.services.anchors import AnchorSeq
from ordode.services.space import CoeffVec, TailKind


class ContinuityKind(str, Enum):
    """How a field's components vary with x between discontinuities."""

    PIECEWISE_CONSTANT = "piecewise-constant"
    CONTINUOUS = "continuous"


# =============================================================================
# Time functions and index maps
# =============================================================================


@dataclass(frozen=True)
class PiecewiseConstant:
    """Left-closed pieces: value[j] on [breakpoints[j-1], breakpoints[j])."""

    breakpoints: tuple[float, ...] = ()
    values: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("piecewise constant needs one more value than breakpoints")
        if not all(np.isfinite(self.values)) or not all(np.isfinite(self.breakpoints)):
            raise ValueError("piecewise constant parameters must be finite")
        if any(b <= a for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @classmethod
    def constant(cls, value: float) -> "PiecewiseConstant":
        return cls((), (value,))

    def __call__(self, t: float) -> float:
        return self.values[bisect.bisect_right(self.breakpoints, t)]

    def cuts(self, t0: float, t1: float) -> list[float]:
        return [b for b in self.breakpoints if t0 < b < t1]

    def pieces(self, t0: float, t1: float) -> list[tuple[float, float, float]]:
        edges = [t0, *self.cuts(t0, t1), t1]
        return [(a, b, self(a)) for a, b in zip(edges, edges[1:])]


@dataclass(frozen=True)
class RhoFamily:
    """rho_k for every k, from a finite list extended by repetition or cycling."""

    functions: tuple[PiecewiseConstant, ...]
    pattern: str = "extend"

    def __post_init__(self):
        if not self.functions:
            raise ValueError("rho family needs at least one function")
        if self.pattern not in ("extend", "cycle"):
            raise ValueError(f"unknown rho pattern: {self.pattern}")

    @classmethod
    def constant(cls, values: Sequence[float], pattern: str = "extend") -> "RhoFamily":
        return cls(tuple(PiecewiseConstant.constant(v) for v in values), pattern)

    def index(self, ks) -> np.ndarray:
        ks = np.asarray(ks, dtype=int)
        if self.pattern == "cycle":
            return ks % len(self.functions)
        return np.minimum(ks, len(self.functions) - 1)

    def for_coordinate(self, k: int) -> PiecewiseConstant:
        return self.functions[int(self.index(k))]

    def values(self, t: float, ks) -> np.ndarray:
        table = np.array([f(t) for f in self.functions])
        return table[self.index(ks)]

    def cuts(self, t0: float, t1: float) -> list[float]:
        return sorted({c for f in self.functions for c in f.cuts(t0, t1)})


@dataclass(frozen=True)
class IndexMap:
    """The coordinate n(k) read by component k."""

    kind: str = "identity"
    table: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("identity", "half", "table"):
            raise ValueError(f"unknown index map: {self.kind}")
        if any(j < 0 for j in self.table):
            raise ValueError("index map entries must be nonnegative")

    def __call__(self, ks):
        ks = np.asarray(ks, dtype=int)
        if self.kind == "half":
            out = ks // 2
        elif self.kind == "table" and self.table:
            table = np.asarray(self.table, dtype=int)
            out = np.where(ks < table.size, table[np.minimum(ks, table.size - 1)], ks)
        else:
            out = ks
        return int(out) if out.ndim == 0 else out


# =============================================================================
# Fields
# =============================================================================


class Field(ABC):
    """Base class for coordinatewise right-hand sides."""

    name: str = "field"
    declared_bound: Optional[AnchorSeq] = None
    declared_monotone: bool = True
    declared_order_left_continuous: bool = True
    continuity: ContinuityKind = ContinuityKind.PIECEWISE_CONSTANT

    @abstractmethod
    def depends_on(self, k: int) -> frozenset[int]:
        """Coordinates read by component k."""

    @abstractmethod
    def evaluate(self, t: float, x: CoeffVec, n: int) -> np.ndarray:
        """Components f_0(t, x) .. f_{n-1}(t, x)."""

    def eval_coord(self, t: float, x: CoeffVec, k: int) -> float:
        return float(self.evaluate(t, x, k + 1)[k])

    def cell_integral(self, t0: float, t1: float, x: CoeffVec, n: int) -> np.ndarray:
        """Integral over [t0, t1] of xi -> f(xi, x); exact for time-independent fields."""
        return (t1 - t0) * self.evaluate(t0, x, n)

    def thresholds(self, t: float, k: int) -> tuple[float, ...]:
        """Values of the read coordinate where component k jumps or kinks."""
        return ()

    def reads_beyond(self, n: int) -> list[tuple[int, int]]:
        """(k, j) pairs with k < n reading a coordinate j >= n."""
        return [(k, j) for k in range(n) for j in sorted(self.depends_on(k)) if j >= n]

    @staticmethod
    def _read(x: CoeffVec, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=int)
        if coords.size == 0:
            return np.zeros(0)
        try:
            return x.values(int(coords.max()) + 1)[coords]
        except AnchorError as exc:
            raise FieldEvaluationError(str(exc), coordinate=int(coords.max())) from exc

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


def heaviside(eta):
    """H(eta) = -1 for eta <= 0, +1 for eta > 0."""
    return np.where(np.asarray(eta) > 0, 1.0, -1.0)


@dataclass(frozen=True)
class HeavisideFieldParams:
    p: int = 1
    n: IndexMap = field(default_factory=IndexMap)
    rho: RhoFamily = field(default_factory=lambda: RhoFamily.constant([1.0]))


class HeavisideField(Field):
    """f_k(t, x) = (k+1)^p * H(x_{n(k)} + rho_k(t))"""

    name = "heaviside"

    def __init__(self, params: HeavisideFieldParams):
        if params.p < 1:
            raise ValueError("p must be a positive integer")
        self.params = params
        self.declared_bound = AnchorSeq.poly(1.0, params.p, name=f"(k+1)^{params.p}")

    def step(self, eta):
        return heaviside(eta)

    def _amplitude(self, n: int) -> np.ndarray:
        return (np.arange(n) + 1.0) ** self.params.p

    def depends_on(self, k: int) -> frozenset[int]:
        return frozenset({self.params.n(k)})

    def evaluate(self, t: float, x: CoeffVec, n: int) -> np.ndarray:
        ks = np.arange(n)
        xs = self._read(x, self.params.n(ks))
        return self._amplitude(n) * self.step(xs + self.params.rho.values(t, ks))

    def cell_integral(self, t0: float, t1: float, x: CoeffVec, n: int) -> np.ndarray:
        # x is frozen over the cell; only rho may switch, at its breakpoints
        ks = np.arange(n)
        xs = self._read(x, self.params.n(ks))
        edges = [t0, *self.params.rho.cuts(t0, t1), t1]
        total = np.zeros(n)
        for a, b in zip(edges, edges[1:]):
            total += (b - a) * self.step(xs + self.params.rho.values(a, ks))
        return self._amplitude(n) * total

    def thresholds(self, t: float, k: int) -> tuple[float, ...]:
        return (-self.params.rho.for_coordinate(k)(t),)


class DieudonneField(Field):
    """f_k(x) = q(x_k) + 1/(k+1) with q(s) = sqrt(s) for s >= 0, else 0."""

    name = "dieudonne"
    continuity = ContinuityKind.CONTINUOUS

    def depends_on(self, k: int) -> frozenset[int]:
        return frozenset({k})

    def evaluate(self, t: float, x: CoeffVec, n: int) -> np.ndarray:
        ks = np.arange(n)
        xs = self._read(x, ks)
        return np.sqrt(np.maximum(xs, 0.0)) + 1.0 / (ks + 1.0)

    def thresholds(self, t: float, k: int) -> tuple[float, ...]:
        return (0.0,)


class ScalarHField(Field):
    """One-dimensional h(x) = 1 for x <= 1, -1 for x > 1. Not monotone."""

    name = "scalar-h"
    declared_monotone = False

    def depends_on(self, k: int) -> frozenset[int]:
        return frozenset({0}) if k == 0 else frozenset()

    def evaluate(self, t: float, x: CoeffVec, n: int) -> np.ndarray:
        out = np.zeros(n)
        if n > 0:
            out[0] = 1.0 if self._read(x, np.array([0]))[0] <= 1.0 else -1.0
        return out

    def thresholds(self, t: float, k: int) -> tuple[float, ...]:
        return (1.0,) if k == 0 else ()


class ConstantField(Field):
    """f(t, x) = C."""

    name = "constant"

    def __init__(self, values: CoeffVec):
        if not values.tail.is_exact:
            raise ValueError("constant field needs an exact tail")
        self.values = values
        if values.n == 0 and values.tail.kind == TailKind.ANCHOR:
            self.declared_bound = values.tail.lower

    def depends_on(self, k: int) -> frozenset[int]:
        return frozenset()

    def evaluate(self, t: float, x: CoeffVec, n: int) -> np.ndarray:
        return self.values.values(n)


def heaviside_field(params: HeavisideFieldParams) -> HeavisideField:
    return HeavisideField(params)


def dieudonne_field() -> DieudonneField:
    return DieudonneField()


def scalar_h_field() -> ScalarHField:
    return ScalarHField()


def constant_field(values: CoeffVec) -> ConstantField:
    return ConstantField(values)
