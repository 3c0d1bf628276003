"""
Weighted sequence spaces and finitely-represented coefficient vectors.

A space is defined by a family of weights w_i(k) (monotone in i) and a
seminorm kind. Vectors are a finite numeric prefix plus a symbolic tail
(zero, an anchor, or a pinched pair of anchors bounding the true tail).
Every seminorm reports the exact prefix value and a rigorous upper bound
on the tail contribution.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from ordode.config import get_settings
from ordode.errors import (
    AnchorError,
    EmptySupremumError,
    NoUpperBoundError,
    OrderUndecidableError,
    TailNotSummableError,
)
from ordode.services.anchors import AnchorSeq, AnchorSign, AnchorTerm

logger = logging.getLogger(__name__)

# Upper limit on explicitly summed tail terms before giving up.
MAX_TAIL_TERMS = 2_000_000


class SeminormKind(str, Enum):
    WEIGHTED_SUM = "weighted-sum"
    WEIGHTED_SUP = "weighted-sup"


# =============================================================================
# Weights
# =============================================================================


class WeightRule(ABC):
    """Family of weight sequences w_i, i = 1, 2, ..."""

    name: str = "weights"

    @abstractmethod
    def weight(self, i: int, k):
        """w_i(k); k may be an integer array."""

    @abstractmethod
    def geometric_from(self, i: int) -> tuple[int, float]:
        """(s, r) such that w_i(k + 1) = r * w_i(k) for every k >= s."""

    @abstractmethod
    def summable(self, ratio: float) -> bool:
        """Whether sum_k w_i(k) (k+1)^p ratio^k converges for every i and p."""

    def vector(self, i: int, n: int) -> np.ndarray:
        return np.asarray(self.weight(i, np.arange(n)), dtype=float)


class PowerSeriesWeights(WeightRule):
    """w_i(k) = r_i**k with r_i = 1 - 1/(i + 1), radii increasing to 1."""

    name = "power-series"

    @staticmethod
    def radius(i: int) -> float:
        if i < 1:
            raise ValueError("seminorm index starts at 1")
        return 1.0 - 1.0 / (i + 1)

    def weight(self, i: int, k):
        return self.radius(i) ** np.asarray(k, dtype=float)

    def geometric_from(self, i: int) -> tuple[int, float]:
        return 0, self.radius(i)

    def summable(self, ratio: float) -> bool:
        # r_i * ratio < 1 for all i iff ratio <= 1
        return ratio <= 1.0

    def __eq__(self, other) -> bool:
        return isinstance(other, PowerSeriesWeights)

    def __hash__(self) -> int:
        return hash(self.name)


class TableWeights(WeightRule):
    """
    Weights given by a table of rows, extended constantly in k and in i.

    Rows are made monotone in i by taking running maxima over earlier rows,
    which leaves the topology unchanged.
    """

    name = "table"

    def __init__(self, rows: Sequence[Sequence[float]]):
        if not rows or any(len(row) == 0 for row in rows):
            raise ValueError("weight table needs at least one non-empty row")
        width = max(len(row) for row in rows)
        table = np.array(
            [list(row) + [row[-1]] * (width - len(row)) for row in rows], dtype=float
        )
        if not np.all(np.isfinite(table)) or np.any(table < 0):
            raise ValueError("weights must be finite and nonnegative")
        monotone = np.maximum.accumulate(table, axis=0)
        if not np.array_equal(monotone, table):
            logger.info("Weight table was not monotone in i; using running maxima")
        # With a monotone family, the last row positive everywhere is the
        # separation condition.
        if np.any(monotone[-1] <= 0):
            raise ValueError("weights do not separate points: last row has a zero entry")
        self.table = monotone
        self.table.setflags(write=False)

    def _row(self, i: int) -> np.ndarray:
        if i < 1:
            raise ValueError("seminorm index starts at 1")
        return self.table[min(i, len(self.table)) - 1]

    def weight(self, i: int, k):
        row = self._row(i)
        kk = np.minimum(np.asarray(k, dtype=int), len(row) - 1)
        return row[kk]

    def geometric_from(self, i: int) -> tuple[int, float]:
        return self.table.shape[1] - 1, 1.0

    def summable(self, ratio: float) -> bool:
        return ratio < 1.0

    def __eq__(self, other) -> bool:
        return isinstance(other, TableWeights) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())


# =============================================================================
# Tail sums
# =============================================================================


def _term_value(weights: WeightRule, i: int, term: AnchorTerm, k: int) -> float:
    return float(weights.weight(i, k)) * float(term(k))


def _ratio_bound(term: AnchorTerm, k: int, rho: float) -> float:
    """Upper bound on t_{m+1} / t_m for every m >= k (once weights are geometric)."""
    growth = ((k + 2.0) / (k + 1.0)) ** term.power
    return max(growth, 1.0) * rho if term.power < 0 else growth * rho


def tail_sum(weights: WeightRule, i: int, term: AnchorTerm, start: int, tol: float) -> float:
    """
    Upper bound on sum_{k >= start} w_i(k) |term(k)|, within tol of the true value.

    Terms are summed directly until the geometric remainder bound drops below tol.
    """
    term = term.scaled(-1.0) if term.coeff < 0 else term
    if term.coeff == 0:
        return 0.0
    s, r = weights.geometric_from(i)
    rho = r * term.ratio
    if rho >= 1.0 and r > 0:
        raise TailNotSummableError(i, f"ratio {term.ratio:g} against weight ratio {r:g}")
    total = 0.0
    k = start
    while k - start < MAX_TAIL_TERMS:
        total += _term_value(weights, i, term, k)
        if k >= s:
            ratio = _ratio_bound(term, k + 1, rho)
            if ratio < 1.0:
                remainder = _term_value(weights, i, term, k + 1) / (1.0 - ratio)
                if remainder <= tol:
                    return total + remainder
        k += 1
    raise TailNotSummableError(i, "tail did not settle")


def tail_sup(weights: WeightRule, i: int, term: AnchorTerm, start: int) -> float:
    """sup_{k >= start} w_i(k) |term(k)|."""
    term = term.scaled(-1.0) if term.coeff < 0 else term
    if term.coeff == 0:
        return 0.0
    s, r = weights.geometric_from(i)
    rho = r * term.ratio
    if rho > 1.0 or (rho == 1.0 and term.power > 0):
        raise TailNotSummableError(i, "weighted terms are unbounded")
    best = 0.0
    k = start
    while k - start < MAX_TAIL_TERMS:
        best = max(best, _term_value(weights, i, term, k))
        if k >= s and _ratio_bound(term, k, rho) <= 1.0:
            return best
        k += 1
    raise TailNotSummableError(i, "tail did not settle")


class Seminorm(NamedTuple):
    """Prefix value and an upper bound on the tail contribution."""

    value: float
    tail_bound: float

    @property
    def total(self) -> float:
        return self.value + self.tail_bound


@dataclass(frozen=True)
class SummabilityWitness:
    """Why an anchor has finite seminorms at every index."""

    anchor: str
    growth_power: float
    growth_ratio: float
    weights: str
    reason: str


@dataclass(frozen=True)
class SpaceSpec:
    """A weighted sequence space E."""

    name: str
    weights: WeightRule
    kind: SeminormKind = SeminormKind.WEIGHTED_SUM

    def prefix_seminorm(self, values: np.ndarray, i: int) -> float:
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return 0.0
        weighted = self.weights.vector(i, values.size) * np.abs(values)
        if self.kind == SeminormKind.WEIGHTED_SUM:
            return float(weighted.sum())
        return float(weighted.max())

    def anchor_tail(self, anchor: AnchorSeq, start: int, i: int, tol: float) -> float:
        terms = anchor.majorant()
        if not terms:
            return 0.0
        if self.kind == SeminormKind.WEIGHTED_SUP:
            return sum(tail_sup(self.weights, i, t, start) for t in terms)
        per_term = tol / len(terms)
        return sum(tail_sum(self.weights, i, t, start, per_term) for t in terms)

    def witness(self, anchor: AnchorSeq) -> SummabilityWitness:
        """Certify that every seminorm of the anchor is finite, or raise."""
        tag = anchor.growth_tag
        for term in anchor.majorant():
            ok = self.weights.summable(term.ratio)
            if self.kind == SeminormKind.WEIGHTED_SUP and not ok:
                ok = term.ratio < 1.0 or (term.ratio == 1.0 and term.power <= 0)
            if not ok:
                raise TailNotSummableError(1, f"term {term.coeff:g}*(k+1)^{term.power:g}*{term.ratio:g}^k")
        reason = "zero tail" if anchor.is_zero else f"geometric ratio {tag.ratio:g} admissible for {self.weights.name} weights"
        return SummabilityWitness(
            anchor=anchor.describe(),
            growth_power=tag.power,
            growth_ratio=tag.ratio,
            weights=self.weights.name,
            reason=reason,
        )


def power_series_space(kind: SeminormKind = SeminormKind.WEIGHTED_SUM) -> SpaceSpec:
    """Entire-function coefficient space with disk radii 1 - 1/(i+1)."""
    return SpaceSpec(name="power-series", weights=PowerSeriesWeights(), kind=kind)


# =============================================================================
# Coefficient vectors
# =============================================================================


class TailKind(str, Enum):
    ZERO = "zero"
    ANCHOR = "anchor"
    PINCHED = "pinched"


@dataclass(frozen=True)
class Tail:
    """Coordinates beyond the prefix: exact (zero/anchor) or pinched between anchors."""

    kind: TailKind
    lower: Optional[AnchorSeq] = None
    upper: Optional[AnchorSeq] = None

    @classmethod
    def zero(cls) -> "Tail":
        return cls(TailKind.ZERO)

    @classmethod
    def anchor(cls, a: AnchorSeq) -> "Tail":
        if a.is_zero:
            return cls.zero()
        return cls(TailKind.ANCHOR, lower=a, upper=a)

    @classmethod
    def pinched(cls, lower: AnchorSeq, upper: AnchorSeq) -> "Tail":
        if lower == upper:
            return cls.anchor(lower)
        return cls(TailKind.PINCHED, lower=lower, upper=upper)

    @property
    def is_exact(self) -> bool:
        return self.kind != TailKind.PINCHED

    def lower_anchor(self) -> AnchorSeq:
        return AnchorSeq.zero() if self.kind == TailKind.ZERO else self.lower

    def upper_anchor(self) -> AnchorSeq:
        return AnchorSeq.zero() if self.kind == TailKind.ZERO else self.upper

    def describe(self) -> str:
        if self.kind == TailKind.ZERO:
            return "0"
        if self.kind == TailKind.ANCHOR:
            return self.lower.describe()
        return f"[{self.lower.describe()}, {self.upper.describe()}]"


def _tail_add(a: Tail, b: Tail) -> Tail:
    if a.kind == TailKind.ZERO:
        return b
    if b.kind == TailKind.ZERO:
        return a
    if a.is_exact and b.is_exact:
        return Tail.anchor(a.lower + b.lower)
    return Tail.pinched(a.lower_anchor() + b.lower_anchor(), a.upper_anchor() + b.upper_anchor())


def _tail_scale(c: float, a: Tail) -> Tail:
    if c == 0 or a.kind == TailKind.ZERO:
        return Tail.zero()
    if a.is_exact:
        return Tail.anchor(a.lower.scale(c))
    if c > 0:
        return Tail.pinched(a.lower.scale(c), a.upper.scale(c))
    return Tail.pinched(a.upper.scale(c), a.lower.scale(c))


@dataclass(frozen=True, eq=False)
class CoeffVec:
    """Finite prefix of coordinates plus a symbolic tail."""

    prefix: np.ndarray
    tail: Tail = Tail(TailKind.ZERO)

    def __post_init__(self):
        prefix = np.array(self.prefix, dtype=float).reshape(-1)
        if not np.all(np.isfinite(prefix)):
            raise ValueError("coefficient prefix must be finite")
        prefix.setflags(write=False)
        object.__setattr__(self, "prefix", prefix)

    @classmethod
    def zero(cls) -> "CoeffVec":
        return cls(np.zeros(0))

    @classmethod
    def from_anchor(cls, anchor: AnchorSeq, prefix: Sequence[float] = ()) -> "CoeffVec":
        return cls(np.asarray(prefix, dtype=float), Tail.anchor(anchor))

    @property
    def n(self) -> int:
        return int(self.prefix.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffVec):
            return NotImplemented
        return np.array_equal(self.prefix, other.prefix) and self.tail == other.tail

    def __hash__(self) -> int:
        return hash((self.prefix.tobytes(), self.tail))

    def __repr__(self) -> str:
        return f"CoeffVec(prefix={self.prefix.tolist()}, tail={self.tail.describe()})"

    # --- coordinate access ---

    def value_at(self, k: int) -> float:
        if k < 0:
            raise IndexError(k)
        if k < self.n:
            return float(self.prefix[k])
        if self.tail.kind == TailKind.ZERO:
            return 0.0
        if self.tail.kind == TailKind.ANCHOR:
            return float(self.tail.lower(k))
        raise AnchorError(f"coordinate {k} lies in a pinched tail; only bounds are known")

    def _extend(self, n: int, anchor: Callable[[], AnchorSeq]) -> np.ndarray:
        if n <= self.n:
            return np.array(self.prefix[:n])
        ks = np.arange(self.n, n)
        return np.concatenate([self.prefix, np.asarray(anchor()(ks), dtype=float)])

    def values(self, n: int) -> np.ndarray:
        """First n coordinates; fails if they reach into a pinched tail."""
        if n > self.n and not self.tail.is_exact:
            raise AnchorError("cannot materialize coordinates of a pinched tail")
        return self._extend(n, self.tail.lower_anchor)

    def lower_values(self, n: int) -> np.ndarray:
        return self._extend(n, self.tail.lower_anchor)

    def upper_values(self, n: int) -> np.ndarray:
        return self._extend(n, self.tail.upper_anchor)

    def with_prefix(self, values: Sequence[float]) -> "CoeffVec":
        """Replace the first len(values) coordinates, keeping the rest."""
        values = np.asarray(values, dtype=float)
        if values.size < self.n:
            values = np.concatenate([values, self.prefix[values.size:]])
        return CoeffVec(values, self.tail)

    def truncated(self, n: int) -> "CoeffVec":
        """Keep n prefix coordinates; the dropped ones are folded into a pinched tail."""
        if n >= self.n:
            return self
        dropped = self.prefix[n:]
        lower = -AnchorSeq.maximum(-self.tail.lower_anchor(), AnchorSeq.constant(-float(dropped.min())))
        upper = AnchorSeq.maximum(self.tail.upper_anchor(), AnchorSeq.constant(float(dropped.max())))
        return CoeffVec(self.prefix[:n], Tail.pinched(lower, upper))

    # --- arithmetic ---

    def __add__(self, other: "CoeffVec") -> "CoeffVec":
        a, b = _aligned([self, other])
        n = max(a.n, b.n)
        return CoeffVec(a.values(n) + b.values(n), _tail_add(a.tail, b.tail))

    def scale(self, c: float) -> "CoeffVec":
        return CoeffVec(c * self.prefix, _tail_scale(c, self.tail))

    def __rmul__(self, c: float) -> "CoeffVec":
        return self.scale(float(c))

    def __neg__(self) -> "CoeffVec":
        return self.scale(-1.0)

    def __sub__(self, other: "CoeffVec") -> "CoeffVec":
        return self + (-other)

    def __abs__(self) -> "CoeffVec":
        return absolute(self)


def _aligned(vs: Sequence[CoeffVec]) -> list[CoeffVec]:
    """Cut every prefix at the shortest pinched one so that all prefixes materialize."""
    pinched = [v.n for v in vs if not v.tail.is_exact]
    if not pinched:
        return list(vs)
    cut = min(pinched)
    return [v.truncated(cut) for v in vs]


# =============================================================================
# Operations
# =============================================================================


def _tail_tol(tail_tol: Optional[float]) -> float:
    tol = tail_tol if tail_tol is not None else get_settings().tail_tol
    if not tol > 0:
        raise ValueError(f"tail_tol must be positive, got {tol}")
    return tol


def seminorm(x: CoeffVec, i: int, space: SpaceSpec, tail_tol: Optional[float] = None) -> Seminorm:
    """Exact prefix seminorm and a certified bound on the tail part."""
    tol = _tail_tol(tail_tol)
    value = space.prefix_seminorm(x.prefix, i)
    tail = x.tail
    if tail.kind == TailKind.ZERO:
        bound = 0.0
    elif tail.is_exact:
        bound = space.anchor_tail(tail.lower, x.n, i, tol)
    else:
        lo = space.anchor_tail(tail.lower, x.n, i, tol / 2)
        hi = space.anchor_tail(tail.upper, x.n, i, tol / 2)
        bound = lo + hi if space.kind == SeminormKind.WEIGHTED_SUM else max(lo, hi)
    return Seminorm(value, bound)


@dataclass(frozen=True)
class CertifiedBool:
    """Order verdict; certified_depth None means certified for every coordinate."""

    holds: bool
    certified_depth: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _compare_tails(upper: AnchorSeq, lower: AnchorSeq, start: int, depth: int) -> CertifiedBool:
    """Decide upper(k) <= lower(k) for every k >= start."""
    if upper == lower:
        return CertifiedBool(True, None, "identical anchors")
    upper_nonpos = upper.is_zero or upper.sign == AnchorSign.NONPOS
    lower_nonneg = lower.is_zero or lower.sign == AnchorSign.NONNEG
    if upper_nonpos and lower_nonneg:
        return CertifiedBool(True, None, "sign metadata")

    ks = np.arange(start, start + depth)
    if upper.is_series and lower.is_series:
        gap = lower - upper
        if gap.is_zero or gap.sign == AnchorSign.NONNEG:
            return CertifiedBool(True, None, "nonnegative series difference")
        samples = np.asarray(gap(ks))
        bad = np.flatnonzero(samples < 0)
        if bad.size:
            return CertifiedBool(False, int(ks[bad[0]]) + 1, "sampled violation")
        if gap.dominant_term().coeff > 0:
            return CertifiedBool(True, start + depth, "dominant term positive, sampled")
        return CertifiedBool(False, start + depth, "dominant term negative")

    samples = np.asarray(lower(ks)) - np.asarray(upper(ks))
    bad = np.flatnonzero(samples < 0)
    if bad.size:
        return CertifiedBool(False, int(ks[bad[0]]) + 1, "sampled violation")
    raise OrderUndecidableError(f"{upper.describe()} vs {lower.describe()}")


def leq(x: CoeffVec, y: CoeffVec, depth: Optional[int] = None) -> CertifiedBool:
    """Coordinatewise x <= y, decided on the prefixes and by rules on the tails."""
    depth = depth if depth is not None else get_settings().order_depth
    n = max(x.n, y.n)
    bad = np.flatnonzero(x.upper_values(n) > y.lower_values(n))
    if bad.size:
        return CertifiedBool(False, int(bad[0]) + 1, f"coordinate {int(bad[0])}")
    if x.n == y.n and x.tail == y.tail:
        return CertifiedBool(True, None, "identical tails")
    return _compare_tails(x.tail.upper_anchor(), y.tail.lower_anchor(), n, depth)


def absolute(x: CoeffVec) -> CoeffVec:
    tail = x.tail
    if tail.kind == TailKind.ZERO:
        new_tail = tail
    elif tail.is_exact:
        new_tail = Tail.anchor(tail.lower.absolute())
    elif tail.lower.sign == AnchorSign.NONNEG:
        new_tail = tail
    elif tail.upper.sign == AnchorSign.NONPOS:
        new_tail = Tail.pinched(-tail.upper, -tail.lower)
    else:
        new_tail = Tail.pinched(
            AnchorSeq.zero(),
            AnchorSeq.maximum(tail.lower.absolute(), tail.upper.absolute()),
        )
    return CoeffVec(np.abs(x.prefix), new_tail)


@dataclass(frozen=True)
class DiagMult:
    """Bounded diagonal multiplier (lambda_k x_k)."""

    rule: Callable[[np.ndarray], np.ndarray]
    sup_norm: float
    name: str = "diag"

    def __post_init__(self):
        if not np.isfinite(self.sup_norm) or self.sup_norm < 0:
            raise ValueError("sup_norm must be finite and nonnegative")
        sample = np.abs(self.values(1000))
        if np.any(sample > self.sup_norm * (1 + 1e-12)):
            raise ValueError(f"multiplier {self.name} exceeds its declared sup norm")

    def values(self, n: int) -> np.ndarray:
        return np.asarray(self.rule(np.arange(n)), dtype=float).reshape(n)

    @classmethod
    def constant(cls, c: float) -> "DiagMult":
        return cls(lambda k: np.full(k.shape, float(c)), abs(c), f"constant({c:g})")

    @classmethod
    def alternating(cls) -> "DiagMult":
        return cls(lambda k: np.where(k % 2 == 0, 1.0, -1.0), 1.0, "alternating")

    @classmethod
    def harmonic(cls) -> "DiagMult":
        return cls(lambda k: 1.0 / (k + 1.0), 1.0, "harmonic")

    @classmethod
    def table(cls, values: Sequence[float], fill: float = 0.0) -> "DiagMult":
        table = np.asarray(values, dtype=float)
        bound = float(max(np.abs(table).max(initial=0.0), abs(fill)))

        def rule(k):
            out = np.full(k.shape, float(fill))
            inside = k < table.size
            out[inside] = table[k[inside]]
            return out

        return cls(rule, bound, "table")


def diag_apply(m: DiagMult, x: CoeffVec) -> CoeffVec:
    """Apply a diagonal multiplier; tails become pinched by the sup norm."""
    prefix = m.values(x.n) * x.prefix
    tail = x.tail
    if tail.kind == TailKind.ZERO or m.sup_norm == 0:
        return CoeffVec(prefix, Tail.zero())
    envelope = AnchorSeq.maximum(tail.lower.absolute(), tail.upper.absolute()).scale(m.sup_norm)
    return CoeffVec(prefix, Tail.pinched(-envelope, envelope))


def coordwise_sup(vs: Sequence[CoeffVec], upper: CoeffVec, depth: Optional[int] = None) -> CoeffVec:
    """Coordinatewise supremum of an order-bounded family."""
    if not vs:
        raise EmptySupremumError()
    for position, v in enumerate(vs):
        if not leq(v, upper, depth).holds:
            raise NoUpperBoundError(position)
    vs = _aligned(vs)
    n = max(v.n for v in vs)
    prefix = np.vstack([v.values(n) for v in vs]).max(axis=0)
    tails = [v.tail for v in vs]
    if all(t == tails[0] for t in tails):
        return CoeffVec(prefix, tails[0])
    lower = AnchorSeq.maximum(*(t.lower_anchor() for t in tails))
    return CoeffVec(prefix, Tail.pinched(lower, upper.truncated(n).tail.upper_anchor()))


def frechet_metric(
    x: CoeffVec,
    y: CoeffVec,
    space: SpaceSpec,
    indices: int = 8,
    tail_tol: Optional[float] = None,
) -> Seminorm:
    """
    d(x, y) = sum_i 2^-i min(1, |x - y|_i), truncated after `indices` terms.

    The tail bound covers both the seminorm tails and the dropped indices.
    """
    diff = x - y
    value = 0.0
    upper = 0.0
    for i in range(1, indices + 1):
        s = seminorm(diff, i, space, tail_tol)
        value += 2.0**-i * min(1.0, s.value)
        upper += 2.0**-i * min(1.0, s.total)
    upper += 2.0**-indices
    return Seminorm(value, upper - value)


@dataclass(frozen=True)
class OrderInterval:
    """Order interval [lo, hi] = {x : lo <= x <= hi}."""

    lo: CoeffVec
    hi: CoeffVec

    def __post_init__(self):
        if not leq(self.lo, self.hi).holds:
            raise ValueError("order interval endpoints are not ordered")

    @property
    def depth(self) -> int:
        return max(self.lo.n, self.hi.n, 1)

    def contains(self, x: CoeffVec, depth: Optional[int] = None) -> bool:
        return leq(self.lo, x, depth).holds and leq(x, self.hi, depth).holds

    def materialize(self, depth: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
        n = depth if depth is not None else self.depth
        return self.lo.lower_values(n), self.hi.upper_values(n)

    def sample(self, rng: np.random.Generator, depth: Optional[int] = None) -> CoeffVec:
        """Random member: convex combination on the first `depth` coordinates, lo beyond."""
        lo, hi = self.materialize(depth)
        alpha = rng.random(lo.size)
        return self.lo.with_prefix(np.clip(alpha * lo + (1.0 - alpha) * hi, lo, hi))

    def seminorm_bound(self, i: int, space: SpaceSpec, tail_tol: Optional[float] = None) -> float:
        """Bound on sup of |x|_i over the interval."""
        centre = seminorm(self.lo + self.hi, i, space, tail_tol).total
        spread = seminorm(self.hi - self.lo, i, space, tail_tol).total
        return 0.5 * (centre + spread)

    def truncation_radius(self, n: int, i: int, space: SpaceSpec, tail_tol: Optional[float] = None) -> float:
        """Weighted half-width of the interval on coordinates k >= n."""
        half = (self.hi - self.lo).scale(0.5)
        m = max(n, half.n)
        inner = half.lower_values(m)[n:]
        ks = np.arange(n, m)
        weights = np.asarray(space.weights.weight(i, ks), dtype=float)
        if space.kind == SeminormKind.WEIGHTED_SUM:
            head = float(np.sum(weights * np.abs(inner)))
        else:
            head = float(np.max(weights * np.abs(inner), initial=0.0))
        tol = _tail_tol(tail_tol)
        beyond = 0.0
        if half.tail.kind != TailKind.ZERO:
            beyond = space.anchor_tail(half.tail.upper_anchor(), m, i, tol)
        if space.kind == SeminormKind.WEIGHTED_SUM:
            return head + beyond
        return max(head, beyond)
