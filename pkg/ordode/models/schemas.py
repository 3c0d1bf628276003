"""
Pydantic models for Ordode.

Two groups live here: the problem-file schema read by the CLI, and the
reports produced by the checkers, the solver and the diagnostics.
"""

from enum import Enum
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# =============================================================================
# Problem file
# =============================================================================


class _FileModel(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class SeminormKindName(str, Enum):
    WEIGHTED_SUM = "weighted-sum"
    WEIGHTED_SUP = "weighted-sup"


class WeightsType(str, Enum):
    POWER_SERIES = "power-series"
    TABLE = "table"


class WeightsSpec(_FileModel):
    """Weight rule by name. `rows` is used by the table rule only."""

    type: WeightsType = WeightsType.POWER_SERIES
    rows: list[list[float]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _rows_for_table(self):
        if self.type == WeightsType.TABLE and not self.rows:
            raise ValueError("table weights need at least one row")
        return self


class SpaceSection(_FileModel):
    name: str = "E"
    kind: SeminormKindName = SeminormKindName.WEIGHTED_SUM
    weights: WeightsSpec = Field(default_factory=WeightsSpec)


class AnchorTermSpec(_FileModel):
    """Term coeff * (k+1)**power * ratio**k."""

    coeff: float
    power: float = 0.0
    ratio: float = Field(1.0, gt=0)


class VectorSpec(_FileModel):
    """
    A coefficient vector.

    zero:   the zero vector
    table:  explicit prefix `values`, zero beyond
    anchor: optional prefix `values`, then the anchor built from `terms`
    """

    type: Literal["zero", "table", "anchor"] = "zero"
    values: list[float] = Field(default_factory=list)
    terms: list[AnchorTermSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _terms_for_anchor(self):
        if self.type == "anchor" and not self.terms:
            raise ValueError("anchor vectors need at least one term")
        if self.type != "anchor" and self.terms:
            raise ValueError(f"terms are only allowed for anchor vectors, not {self.type}")
        if self.type == "zero" and self.values:
            raise ValueError("zero vectors take no values")
        return self


class IndexMapSpec(_FileModel):
    type: Literal["identity", "half", "table"] = "identity"
    table: list[int] = Field(default_factory=list)

    @field_validator("table")
    @classmethod
    def _nonnegative(cls, v: list[int]) -> list[int]:
        if any(j < 0 for j in v):
            raise ValueError("index map entries must be nonnegative")
        return v


class PiecewiseSpec(_FileModel):
    """One piecewise-constant time function: len(values) == len(breakpoints) + 1."""

    breakpoints: list[float] = Field(default_factory=list)
    values: list[float]

    @model_validator(mode="after")
    def _shape(self):
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("piecewise function needs one more value than breakpoints")
        if any(b <= a for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        return self


class RhoSpec(_FileModel):
    """
    Per-coordinate time shifts rho_k(t).

    constant:  rho_k is values[k] (pattern decides indices past the list)
    piecewise: rho_k is pieces[k] (same pattern rule)
    """

    type: Literal["constant", "piecewise"] = "constant"
    values: list[float] = Field(default_factory=lambda: [0.0])
    pieces: list[PiecewiseSpec] = Field(default_factory=list)
    pattern: Literal["extend", "cycle"] = "extend"

    @model_validator(mode="after")
    def _populated(self):
        if self.type == "constant" and not self.values:
            raise ValueError("constant rho needs at least one value")
        if self.type == "piecewise" and not self.pieces:
            raise ValueError("piecewise rho needs at least one piece list")
        return self


class FieldType(str, Enum):
    HEAVISIDE = "heaviside"
    DIEUDONNE = "dieudonne"
    SCALAR_H = "scalar-h"
    CONSTANT = "constant"


class FieldParams(_FileModel):
    p: int = Field(1, ge=1)
    n: IndexMapSpec = Field(default_factory=IndexMapSpec)
    rho: RhoSpec = Field(default_factory=RhoSpec)
    values: Optional[VectorSpec] = None  # constant field only


class FieldSection(_FileModel):
    type: FieldType
    params: FieldParams = Field(default_factory=FieldParams)

    @model_validator(mode="after")
    def _constant_values(self):
        if self.type == FieldType.CONSTANT and self.params.values is None:
            raise ValueError("constant field needs params.values")
        return self


class ProblemSection(_FileModel):
    T: float = Field(gt=0)
    N: int = Field(ge=1)
    M: int = Field(ge=1)
    x_hat: VectorSpec = Field(default_factory=VectorSpec)
    x_star: VectorSpec = Field(default_factory=VectorSpec)
    C: Optional[VectorSpec] = None


class SolverSection(_FileModel):
    tol_residual: float = Field(1e-12, gt=0)
    max_iters: int = Field(100, ge=1)
    max_refines: int = Field(0, ge=0)
    override_hypotheses: bool = False
    rng_seed: int = 0
    check_trials: Optional[int] = Field(None, ge=1)


class ProblemFile(_FileModel):
    """Top-level problem document."""

    description: str = ""
    space: SpaceSection = Field(default_factory=SpaceSection)
    field: FieldSection
    problem: ProblemSection
    solver: SolverSection = Field(default_factory=SolverSection)


# =============================================================================
# Reports
# =============================================================================


class _Report(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class Witness(_Report):
    """Where a check failed: the trial, time, coordinate and the evidence."""

    trial: Optional[int] = None
    node: Optional[int] = None
    t: Optional[float] = None
    k: int
    read: Optional[int] = None  # coordinate of x/y that component k depends on
    x: list[float] = Field(default_factory=list)
    y: list[float] = Field(default_factory=list)
    values: dict[str, float] = Field(default_factory=dict)


class CheckReport(_Report):
    name: str
    ok: bool
    trials: int = 0
    seed: Optional[int] = None
    witness: Optional[Witness] = None
    detail: str = ""
    metrics: dict[str, list[float]] = Field(default_factory=dict)

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        seed = f", seed {self.seed}" if self.seed is not None else ""
        line = f"{verdict} {self.name} ({self.trials} trials{seed})"
        if self.witness is not None:
            w = self.witness
            where = [f"k={w.k}"]
            if w.t is not None:
                where.append(f"t={w.t:g}")
            if w.node is not None:
                where.append(f"node={w.node}")
            j = w.read if w.read is not None else w.k
            if j < len(w.x):
                where.append(f"x[{j}]={w.x[j]:.6g}")
            if j < len(w.y):
                where.append(f"y[{j}]={w.y[j]:.6g}")
            where.extend(f"{key}={value:.6g}" for key, value in w.values.items())
            line = f"{line}: witness {', '.join(where)}"
        if self.detail:
            line = f"{line} [{self.detail}]"
        return line


class ResidualReport(_Report):
    per_index: list[float]
    coord_max: float
    metric: Optional[float] = None


class SolveReport(_Report):
    trajectory: Any  # quadrature.Trajectory
    iterations: int
    refines: int
    residual_per_index: list[float]
    coordinate_residual_max: float
    monotone_certificate: bool
    enclosure_certificate: bool
    invariant_set_certificate: bool
    converged: bool
    hypothesis_reports: list[CheckReport] = Field(default_factory=list)
    increment_history: list[float] = Field(default_factory=list)
    final_node_increments: list[float] = Field(default_factory=list)
    metric_residual: Optional[float] = None
    truncation_radius: list[float] = Field(default_factory=list)
    truncation_witnesses: list[tuple[int, int]] = Field(default_factory=list)

    def summary(self) -> str:
        lines = [
            f"converged: {self.converged}",
            f"iterations: {self.iterations}, refines: {self.refines}, grid cells: {self.trajectory.grid.M}",
            f"coordinate residual max: {self.coordinate_residual_max:.3e}",
            "seminorm residuals i=1..8: " + ", ".join(f"{r:.3e}" for r in self.residual_per_index),
            f"monotone certificate: {self.monotone_certificate}",
            f"enclosure certificate: {self.enclosure_certificate}",
            f"invariant-set certificate: {self.invariant_set_certificate}",
        ]
        if self.metric_residual is not None:
            lines.append(f"metric residual: {self.metric_residual:.3e}")
        if self.truncation_witnesses:
            k, j = self.truncation_witnesses[0]
            lines.append(
                f"truncation: {len(self.truncation_witnesses)} reads beyond N (first: coordinate {k} reads {j})"
            )
        return "\n".join(lines)


class WeakDerivativeReport(_Report):
    fraction_ok: float
    excluded_nodes: int
    excluded_comparisons: int
    compared: int
    tol: float


class DieudonneReport(_Report):
    T: float
    fine_M: int
    per_mode_values: dict[int, float]
    inf_value: float
