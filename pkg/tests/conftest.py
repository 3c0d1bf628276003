import json

import numpy as np
import pytest

from ordode.config import Settings, init_settings
from ordode.services.anchors import AnchorSeq
from ordode.services.fields import (
    HeavisideField,
    HeavisideFieldParams,
    IndexMap,
    PiecewiseConstant,
    RhoFamily,
    constant_field,
)
from ordode.services.problem_loader import bundled_problem, get_problem_loader
from ordode.services.quadrature import TimeGrid
from ordode.services.solver import Problem
from ordode.services.space import CoeffVec, power_series_space


@pytest.fixture(autouse=True)
def settings():
    """Defaults independent of the caller's environment."""
    return init_settings(Settings())


@pytest.fixture
def space():
    return power_series_space()


@pytest.fixture
def load_problem():
    def _load(name: str) -> Problem:
        return get_problem_loader().load(bundled_problem(name))

    return _load


@pytest.fixture
def heaviside_problem(load_problem) -> Problem:
    return load_problem("heaviside")


class RightContinuousStepField(HeavisideField):
    """Heaviside field with the jump value moved to the right: +1 at eta = 0."""

    name = "right-continuous-step"

    def step(self, eta):
        return np.where(np.asarray(eta) >= 0, 1.0, -1.0)


@pytest.fixture
def right_continuous_field():
    return RightContinuousStepField(HeavisideFieldParams())


def make_problem(field, N, M=64, T=1.0, x_hat=None, x_star=None, bound_C=None, **solver) -> Problem:
    return Problem(
        space=power_series_space(),
        field=field,
        x_hat=x_hat if x_hat is not None else CoeffVec.zero(),
        x_star=x_star if x_star is not None else CoeffVec.zero(),
        bound_C=bound_C if bound_C is not None else CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1)),
        T=T,
        N=N,
        grid=TimeGrid.uniform(T, M),
        **solver,
    )


@pytest.fixture
def problem_factory():
    return make_problem


@pytest.fixture
def single_mode_problem():
    """u' = H(u + rho(t)), u(0) = 0, starting below at x_star = -1."""

    def _build(rho: PiecewiseConstant, M: int = 64, **solver) -> Problem:
        params = HeavisideFieldParams(p=1, n=IndexMap(), rho=RhoFamily((rho,)))
        return make_problem(
            HeavisideField(params),
            N=1,
            M=M,
            x_star=CoeffVec([-1.0]),
            bound_C=CoeffVec([1.0]),
            **solver,
        )

    return _build


@pytest.fixture
def constant_problem():
    """f = C with C_k = k + 1, so u_k(t) = x_hat_k + (k + 1) t exactly."""

    def _build(N: int = 4, M: int = 16) -> Problem:
        c = CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1))
        return make_problem(constant_field(c), N=N, M=M, x_star=c.scale(-1.0), bound_C=c)

    return _build


@pytest.fixture
def write_problem(tmp_path):
    """Write a problem document to tmp_path and return its path."""

    def _write(doc, name: str = "problem.json"):
        path = tmp_path / name
        text = doc if isinstance(doc, str) else json.dumps(doc, indent=2)
        path.write_text(text, encoding="utf-8")
        return path

    return _write
