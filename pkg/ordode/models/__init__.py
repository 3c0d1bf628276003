# Models package
from .schemas import (
    AnchorTermSpec,
    CheckReport,
    DieudonneReport,
    FieldSection,
    FieldType,
    IndexMapSpec,
    ProblemFile,
    ProblemSection,
    ResidualReport,
    RhoSpec,
    SeminormKindName,
    SolveReport,
    SolverSection,
    SpaceSection,
    VectorSpec,
    WeakDerivativeReport,
    WeightsSpec,
    WeightsType,
    Witness,
)

__all__ = [
    "AnchorTermSpec",
    "CheckReport",
    "DieudonneReport",
    "FieldSection",
    "FieldType",
    "IndexMapSpec",
    "ProblemFile",
    "ProblemSection",
    "ResidualReport",
    "RhoSpec",
    "SeminormKindName",
    "SolveReport",
    "SolverSection",
    "SpaceSection",
    "VectorSpec",
    "WeakDerivativeReport",
    "WeightsSpec",
    "WeightsType",
    "Witness",
]
