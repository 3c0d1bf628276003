"""
Closed-form anchor sequences used as symbolic tails of coefficient vectors.

An anchor is a small expression over series terms

    c * (k + 1)**power * ratio**k

closed under addition and scaling. Absolute values and pointwise maxima
of anchors that cannot be rewritten as a series are kept as expression
nodes; tail sums then fall back to the term-wise majorant.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

import numpy as np

from ordode.errors import AnchorError

Index = Union[int, np.ndarray]


class AnchorSign(str, Enum):
    """Sign metadata of an anchor over all coordinates."""

    NONNEG = "nonneg"
    NONPOS = "nonpos"
    MIXED = "mixed"


class AnchorKind(str, Enum):
    SERIES = "series"
    ABS = "abs"
    MAX = "max"
    SUM = "sum"


@dataclass(frozen=True, order=True)
class AnchorTerm:
    """One term c * (k + 1)**power * ratio**k."""

    power: float = 0.0
    ratio: float = 1.0
    coeff: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.coeff) and np.isfinite(self.power) and np.isfinite(self.ratio)):
            raise AnchorError("anchor term parameters must be finite")
        if self.ratio <= 0:
            raise AnchorError("anchor term ratio must be positive")

    def __call__(self, k: Index):
        kk = np.asarray(k, dtype=float)
        with np.errstate(over="ignore", under="ignore"):
            value = self.coeff * np.ones_like(kk)
            if self.power != 0:
                value = value * (kk + 1.0) ** self.power
            if self.ratio != 1.0:
                value = value * self.ratio**kk
        return value

    def scaled(self, factor: float) -> "AnchorTerm":
        return replace(self, coeff=self.coeff * factor)


@dataclass(frozen=True)
class GrowthTag:
    """Growth metadata used by the tail-sum routines."""

    power: float
    ratio: float


def _sign_of_coeffs(coeffs) -> AnchorSign:
    if all(c >= 0 for c in coeffs):
        return AnchorSign.NONNEG
    if all(c <= 0 for c in coeffs):
        return AnchorSign.NONPOS
    return AnchorSign.MIXED


def _flip(sign: AnchorSign) -> AnchorSign:
    if sign == AnchorSign.NONNEG:
        return AnchorSign.NONPOS
    if sign == AnchorSign.NONPOS:
        return AnchorSign.NONNEG
    return sign


@dataclass(frozen=True)
class AnchorSeq:
    """A pure, total rule k -> real with sign and growth metadata."""

    kind: AnchorKind = AnchorKind.SERIES
    terms: tuple[AnchorTerm, ...] = ()
    parts: tuple["AnchorSeq", ...] = ()
    factor: float = 1.0
    name: str = field(default="", compare=False)

    # --- constructors ---

    @classmethod
    def series(cls, *terms: AnchorTerm, name: str = "") -> "AnchorSeq":
        """Build a series anchor; equal (power, ratio) terms are merged."""
        merged: dict[tuple[float, float], float] = {}
        for term in terms:
            key = (float(term.power), float(term.ratio))
            merged[key] = merged.get(key, 0.0) + float(term.coeff)
        normalized = tuple(
            AnchorTerm(power=p, ratio=r, coeff=c)
            for (p, r), c in sorted(merged.items())
            if c != 0.0
        )
        return cls(kind=AnchorKind.SERIES, terms=normalized, name=name)

    @classmethod
    def zero(cls) -> "AnchorSeq":
        return cls.series(name="0")

    @classmethod
    def poly(cls, coeff: float, power: float, name: str = "") -> "AnchorSeq":
        """coeff * (k + 1)**power"""
        return cls.series(AnchorTerm(power=power, coeff=coeff), name=name)

    @classmethod
    def geometric(cls, coeff: float, ratio: float, name: str = "") -> "AnchorSeq":
        return cls.series(AnchorTerm(ratio=ratio, coeff=coeff), name=name)

    @classmethod
    def constant(cls, value: float, name: str = "") -> "AnchorSeq":
        return cls.series(AnchorTerm(coeff=value), name=name)

    @classmethod
    def maximum(cls, *anchors: "AnchorSeq") -> "AnchorSeq":
        """Pointwise maximum of anchors."""
        if not anchors:
            raise AnchorError("maximum of no anchors")
        distinct: list[AnchorSeq] = []
        for anchor in anchors:
            if anchor not in distinct:
                distinct.append(anchor)
        if len(distinct) == 1:
            return distinct[0]
        return cls(kind=AnchorKind.MAX, parts=tuple(distinct))

    # --- evaluation ---

    def __call__(self, k: Index):
        scalar = np.ndim(k) == 0
        kk = np.asarray(k, dtype=float)
        if self.kind == AnchorKind.SERIES:
            value = np.zeros_like(kk)
            for term in self.terms:
                value = value + term(kk)
        else:
            values = [part(kk) for part in self.parts]
            if self.kind == AnchorKind.ABS:
                value = np.abs(values[0])
            elif self.kind == AnchorKind.MAX:
                value = np.maximum.reduce(values)
            else:
                value = np.sum(values, axis=0)
            value = self.factor * value
        return float(value) if scalar else value

    # --- metadata ---

    @property
    def is_zero(self) -> bool:
        return self.kind == AnchorKind.SERIES and not self.terms

    @property
    def is_series(self) -> bool:
        return self.kind == AnchorKind.SERIES

    @property
    def sign(self) -> AnchorSign:
        if self.kind == AnchorKind.SERIES:
            return _sign_of_coeffs([t.coeff for t in self.terms])
        if self.kind == AnchorKind.ABS:
            base = AnchorSign.NONNEG
        elif self.kind == AnchorKind.MAX:
            signs = [part.sign for part in self.parts]
            if AnchorSign.NONNEG in signs:
                base = AnchorSign.NONNEG
            elif all(s == AnchorSign.NONPOS for s in signs):
                base = AnchorSign.NONPOS
            else:
                base = AnchorSign.MIXED
        else:
            signs = {part.sign for part in self.parts}
            base = signs.pop() if len(signs) == 1 else AnchorSign.MIXED
        return _flip(base) if self.factor < 0 else base

    def majorant(self) -> tuple[AnchorTerm, ...]:
        """Nonnegative series terms whose sum bounds |self(k)| for every k."""
        if self.kind == AnchorKind.SERIES:
            return tuple(t.scaled(-1.0) if t.coeff < 0 else t for t in self.terms)
        scale = abs(self.factor)
        out: list[AnchorTerm] = []
        for part in self.parts:
            out.extend(t.scaled(scale) for t in part.majorant())
        return tuple(out)

    @property
    def growth_tag(self) -> GrowthTag:
        terms = self.majorant()
        if not terms:
            return GrowthTag(power=0.0, ratio=0.0)
        return GrowthTag(
            power=max(t.power for t in terms),
            ratio=max(t.ratio for t in terms),
        )

    def dominant_term(self) -> AnchorTerm:
        """Term that decides the eventual sign of a series anchor."""
        if not self.is_series or not self.terms:
            raise AnchorError("dominant term is defined for nonzero series anchors only")
        return max(self.terms, key=lambda t: (t.ratio, t.power))

    # --- algebra ---

    def scale(self, c: float) -> "AnchorSeq":
        if c == 0:
            return AnchorSeq.zero()
        if self.kind == AnchorKind.SERIES:
            return AnchorSeq.series(*(t.scaled(c) for t in self.terms))
        return replace(self, factor=self.factor * c, name="")

    def __neg__(self) -> "AnchorSeq":
        return self.scale(-1.0)

    def __add__(self, other: "AnchorSeq") -> "AnchorSeq":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.is_series and other.is_series:
            return AnchorSeq.series(*self.terms, *other.terms)
        parts = []
        for anchor in (self, other):
            if anchor.kind == AnchorKind.SUM and anchor.factor == 1.0:
                parts.extend(anchor.parts)
            else:
                parts.append(anchor)
        return AnchorSeq(kind=AnchorKind.SUM, parts=tuple(parts))

    def __sub__(self, other: "AnchorSeq") -> "AnchorSeq":
        return self + (-other)

    def absolute(self) -> "AnchorSeq":
        sign = self.sign
        if self.is_zero or sign == AnchorSign.NONNEG:
            return self
        if sign == AnchorSign.NONPOS:
            return -self
        if self.kind == AnchorKind.ABS:
            return replace(self, factor=abs(self.factor))
        return AnchorSeq(kind=AnchorKind.ABS, parts=(self,))

    # --- reporting ---

    def describe(self) -> str:
        if self.name:
            return self.name
        if self.kind == AnchorKind.SERIES:
            if not self.terms:
                return "0"
            pieces = []
            for t in self.terms:
                text = f"{t.coeff:g}"
                if t.power != 0:
                    text += f"*(k+1)^{t.power:g}"
                if t.ratio != 1.0:
                    text += f"*{t.ratio:g}^k"
                pieces.append(text)
            return " + ".join(pieces)
        inner = ", ".join(part.describe() for part in self.parts)
        prefix = "" if self.factor == 1.0 else f"{self.factor:g}*"
        return f"{prefix}{self.kind.value}({inner})"

    def __str__(self) -> str:
        return self.describe()
