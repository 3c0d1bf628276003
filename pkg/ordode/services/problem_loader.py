"""
Problem file loading for Ordode.

Reads a JSON problem document, validates it against the ProblemFile schema
and builds the solver's Problem. Every failure becomes a ProblemFileError
carrying the JSON path and, where possible, the line and column.
"""

import json
import logging
from pathlib import Path
from typing import Optional, Sequence, Union

from pydantic import ValidationError

from ordode.errors import OrdodeError, ProblemFileError
from ordode.models import (
    FieldSection,
    FieldType,
    ProblemFile,
    SpaceSection,
    VectorSpec,
    WeightsType,
)
from ordode.services.anchors import AnchorSeq, AnchorTerm
from ordode.services.fields import (
    Field,
    HeavisideFieldParams,
    IndexMap,
    PiecewiseConstant,
    RhoFamily,
    constant_field,
    dieudonne_field,
    heaviside_field,
    scalar_h_field,
)
from ordode.services.quadrature import TimeGrid
from ordode.services.solver import Problem
from ordode.services.space import (
    CoeffVec,
    PowerSeriesWeights,
    SeminormKind,
    SpaceSpec,
    TableWeights,
)

logger = logging.getLogger(__name__)

PROBLEMS_DIR = Path(__file__).parent.parent / "problems"


def _locate(text: str, loc: Sequence[Union[str, int]]) -> tuple[Optional[int], Optional[int]]:
    """Line and column of the deepest key of `loc` found in the document."""
    pos = 0
    found = None
    for part in loc:
        if isinstance(part, int):
            continue
        idx = text.find(f'"{part}"', pos)
        if idx < 0:
            break
        found = idx
        pos = idx + 1
    if found is None:
        return None, None
    line = text.count("\n", 0, found) + 1
    column = found - (text.rfind("\n", 0, found) + 1) + 1
    return line, column


def build_vector(spec: VectorSpec) -> CoeffVec:
    if spec.type == "zero":
        return CoeffVec.zero()
    if spec.type == "table":
        return CoeffVec(spec.values)
    terms = [AnchorTerm(power=t.power, ratio=t.ratio, coeff=t.coeff) for t in spec.terms]
    return CoeffVec.from_anchor(AnchorSeq.series(*terms), prefix=spec.values)


def build_space(section: SpaceSection) -> SpaceSpec:
    if section.weights.type == WeightsType.TABLE:
        weights = TableWeights(section.weights.rows)
    else:
        weights = PowerSeriesWeights()
    return SpaceSpec(name=section.name, weights=weights, kind=SeminormKind(section.kind.value))


def build_field(section: FieldSection) -> Field:
    params = section.params
    if section.type == FieldType.HEAVISIDE:
        rho_spec = params.rho
        if rho_spec.type == "constant":
            rho = RhoFamily.constant(rho_spec.values, rho_spec.pattern)
        else:
            rho = RhoFamily(
                tuple(PiecewiseConstant(tuple(p.breakpoints), tuple(p.values)) for p in rho_spec.pieces),
                rho_spec.pattern,
            )
        index_map = IndexMap(params.n.type, tuple(params.n.table))
        return heaviside_field(HeavisideFieldParams(p=params.p, n=index_map, rho=rho))
    if section.type == FieldType.DIEUDONNE:
        return dieudonne_field()
    if section.type == FieldType.SCALAR_H:
        return scalar_h_field()
    return constant_field(build_vector(params.values))


class ProblemLoader:
    """Reads problem files and turns them into solver problems."""

    def read(self, path: Path) -> ProblemFile:
        """Parse and validate a problem file. OSError propagates unchanged."""
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        return self.parse(text, source=str(path))

    def parse(self, text: str, source: str = "") -> ProblemFile:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ProblemFileError(e.msg, e.lineno, e.colno, source) from e
        try:
            return ProblemFile.model_validate(data)
        except ValidationError as e:
            err = e.errors()[0]
            loc = tuple(err.get("loc", ()))
            line, column = _locate(text, loc)
            where = ".".join(str(part) for part in loc)
            message = f"{where}: {err['msg']}" if where else err["msg"]
            raise ProblemFileError(message, line, column, source) from e

    def build(self, pf: ProblemFile, name: str = "") -> Problem:
        try:
            space = build_space(pf.space)
            field = build_field(pf.field)
            section = pf.problem
            if section.C is not None:
                bound = build_vector(section.C)
            elif field.declared_bound is not None:
                bound = CoeffVec.from_anchor(field.declared_bound)
            else:
                raise ProblemFileError("problem.C is required for this field type")
            solver = pf.solver
            return Problem(
                space=space,
                field=field,
                x_hat=build_vector(section.x_hat),
                x_star=build_vector(section.x_star),
                bound_C=bound,
                T=section.T,
                N=section.N,
                grid=TimeGrid.uniform(section.T, section.M),
                tol_residual=solver.tol_residual,
                max_iters=solver.max_iters,
                max_refines=solver.max_refines,
                override_hypotheses=solver.override_hypotheses,
                rng_seed=solver.rng_seed,
                check_trials=solver.check_trials,
                name=name,
            )
        except ProblemFileError:
            raise
        except (OrdodeError, ValueError, ArithmeticError) as e:
            raise ProblemFileError(str(e), path=name) from e

    def load(self, path: Path) -> Problem:
        path = Path(path)
        pf = self.read(path)
        problem = self.build(pf, name=path.stem)
        logger.info("Loaded problem %s (N=%d, M=%d)", path.stem, problem.N, problem.grid.M)
        return problem


def bundled_problem(name: str) -> Path:
    """Path of a problem file shipped with the package."""
    return PROBLEMS_DIR / f"{name}.json"


# Global instance
_problem_loader: Optional[ProblemLoader] = None


def get_problem_loader() -> ProblemLoader:
    """Get the global problem loader instance."""
    global _problem_loader
    if _problem_loader is None:
        _problem_loader = ProblemLoader()
    return _problem_loader
