import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ordode.errors import (
    AnchorError,
    EmptySupremumError,
    NoUpperBoundError,
    OrderUndecidableError,
    TailNotSummableError,
)
from ordode.services.anchors import AnchorSeq, AnchorSign
from ordode.services.space import (
    CoeffVec,
    DiagMult,
    OrderInterval,
    SeminormKind,
    SpaceSpec,
    TableWeights,
    Tail,
    TailKind,
    absolute,
    coordwise_sup,
    diag_apply,
    frechet_metric,
    leq,
    power_series_space,
    seminorm,
)

DRAWS = 1000
INDICES = range(1, 9)
ULP_SLACK = 1 + 4 * np.finfo(float).eps

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


# --- seminorms ---


def test_seminorm_of_a_unit_vector(space):
    assert seminorm(CoeffVec([1.0]), 1, space) == (1.0, 0.0)


def test_seminorm_anchor_tail_sums_to_closed_form(space):
    x = CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1))
    s = seminorm(x, 1, space, tail_tol=1e-12)
    assert s.value == 0.0
    # sum_k (k+1) (1/2)^k = 1 / (1 - 1/2)^2
    assert 4.0 - 1e-12 <= s.tail_bound <= 4.0 + 1e-10


def test_seminorm_of_zero(space):
    for i in INDICES:
        assert seminorm(CoeffVec.zero(), i, space) == (0.0, 0.0)


def test_seminorm_prefix_plus_tail(space):
    x = CoeffVec.from_anchor(AnchorSeq.constant(1.0), prefix=[3.0, -2.0])
    s = seminorm(x, 1, space, tail_tol=1e-13)
    assert s.value == 3.0 + 0.5 * 2.0
    # sum_{k>=2} 2^-k = 1/2
    assert s.tail_bound == pytest.approx(0.5, abs=1e-12)
    assert s.total == pytest.approx(4.5, abs=1e-12)


def test_weighted_sup_seminorm():
    space = power_series_space(SeminormKind.WEIGHTED_SUP)
    x = CoeffVec([1.0, -4.0, 2.0])
    assert seminorm(x, 1, space).value == 2.0
    tail = CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1))
    assert seminorm(tail, 1, space).tail_bound == 1.0


def test_unsummable_tail_raises(space):
    x = CoeffVec.from_anchor(AnchorSeq.geometric(1.0, 2.0))
    with pytest.raises(TailNotSummableError, match="tail not summable at index 1"):
        seminorm(x, 1, space)
    with pytest.raises(TailNotSummableError):
        space.witness(AnchorSeq.geometric(1.0, 1.5))


@pytest.mark.parametrize("tol", [0.0, -1e-12])
def test_nonpositive_tail_tolerance_is_rejected(space, tol):
    x = CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1))
    with pytest.raises(ValueError, match="tail_tol must be positive"):
        seminorm(x, 1, space, tail_tol=tol)


def test_witness_for_admissible_anchor(space):
    w = space.witness(AnchorSeq.poly(1.0, 3))
    assert w.growth_power == 3.0
    assert w.weights == "power-series"


def test_table_weights_are_made_monotone():
    weights = TableWeights([[2.0, 1.0], [1.0, 3.0, 1.0]])
    np.testing.assert_array_equal(weights.table, [[2.0, 1.0, 1.0], [2.0, 3.0, 1.0]])
    assert weights.weight(5, 10) == 1.0


def test_table_weights_must_separate_points():
    with pytest.raises(ValueError, match="separate"):
        TableWeights([[1.0, 0.0]])


def test_table_weights_tails():
    space = SpaceSpec(name="table", weights=TableWeights([[1.0]]))
    geometric = CoeffVec.from_anchor(AnchorSeq.geometric(1.0, 0.5))
    assert seminorm(geometric, 1, space, tail_tol=1e-13).tail_bound == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(TailNotSummableError):
        seminorm(CoeffVec.from_anchor(AnchorSeq.constant(1.0)), 1, space)


# --- order ---


def test_leq_examples():
    assert leq(CoeffVec([0.0, 0.0]), CoeffVec([1.0, 2.0]))
    verdict = leq(CoeffVec([1.0, 0.0]), CoeffVec([0.0, 1.0]))
    assert not verdict
    assert verdict.certified_depth == 1


def test_leq_nonpositive_tail_below_zero():
    x = CoeffVec.from_anchor(AnchorSeq.poly(-1.0, 1), prefix=[-1.0, -2.0])
    verdict = leq(x, CoeffVec.zero())
    assert verdict.holds
    assert verdict.certified_depth is None
    assert np.all(x.values(10_001) <= 0)


def test_leq_mixed_series_decided_by_dominant_term():
    x = CoeffVec.from_anchor(AnchorSeq.poly(3.0, 1), prefix=[0.0, 0.0, 0.0])
    y = CoeffVec.from_anchor(AnchorSeq.poly(1.0, 2), prefix=[1.0, 1.0, 1.0])
    verdict = leq(x, y, depth=100)
    assert verdict.holds
    assert verdict.certified_depth == 103
    # without the prefix the gap (k+1)^2 - 3(k+1) is negative at k = 0
    assert not leq(CoeffVec.from_anchor(AnchorSeq.poly(3.0, 1)), CoeffVec.from_anchor(AnchorSeq.poly(1.0, 2)), depth=100)


def test_leq_undecidable_without_rule():
    upper = CoeffVec.from_anchor(AnchorSeq.maximum(AnchorSeq.constant(1.0), AnchorSeq.poly(-1.0, 1)))
    assert upper.tail.lower.sign == AnchorSign.NONNEG
    with pytest.raises(OrderUndecidableError, match="order undecidable beyond prefix"):
        leq(upper, CoeffVec.from_anchor(AnchorSeq.constant(2.0)), depth=50)


def _pinched(prefix):
    """Vector whose tail is only known to lie within +-(k+1)."""
    return diag_apply(DiagMult.constant(1.0), CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1), prefix=prefix))


@seed(1)
@given(x=arrays(np.float64, 5, elements=finite), y=arrays(np.float64, 5, elements=finite))
def test_leq_is_a_partial_order(x, y):
    for make in (CoeffVec, _pinched):
        a, b = make(x), make(y)
        assert leq(a, a)
        if leq(a, b) and leq(b, a):
            assert a == b
        top = make(np.maximum(x, y))
        assert leq(a, top) and leq(b, top)
        assert leq(a, make(np.maximum(x, y) + 1.0))


def test_leq_is_reflexive_on_a_pinched_tail():
    x = _pinched([0.0])
    assert x.tail.kind == TailKind.PINCHED
    verdict = leq(x, x)
    assert verdict.holds
    assert verdict.certified_depth is None


# --- absolute value and multipliers ---


def test_abs_examples():
    assert absolute(CoeffVec([-1.0, 2.0, -3.0])) == CoeffVec([1.0, 2.0, 3.0])
    x = abs(CoeffVec.from_anchor(AnchorSeq.poly(-1.0, 2)))
    assert x.tail == Tail.anchor(AnchorSeq.poly(1.0, 2))
    assert x.tail.lower.sign == AnchorSign.NONNEG
    assert absolute(CoeffVec.zero()) == CoeffVec.zero()


def test_abs_of_pinched_tail():
    x = CoeffVec([0.0], Tail.pinched(AnchorSeq.poly(-1.0, 1), AnchorSeq.constant(2.0)))
    a = absolute(x)
    assert a.tail.kind == TailKind.PINCHED
    assert a.tail.lower.is_zero
    ks = np.arange(1, 20)
    assert np.all(a.tail.upper(ks) >= np.maximum(ks + 1.0, 2.0))


@seed(2)
@given(x=arrays(np.float64, 6, elements=finite))
def test_abs_dominates_and_is_idempotent(x):
    v = CoeffVec(x)
    assert leq(v, abs(v))
    assert leq(-v, abs(v))
    assert abs(abs(v)) == abs(v)


def test_diag_identity_keeps_prefix_and_encloses_tail():
    x = CoeffVec.from_anchor(AnchorSeq.poly(-1.0, 1), prefix=[1.0, -2.0])
    y = diag_apply(DiagMult.constant(1.0), x)
    np.testing.assert_array_equal(y.prefix, x.prefix)
    ks = np.arange(2, 50)
    assert np.all(y.tail.lower(ks) <= x.tail.lower(ks))
    assert np.all(x.tail.upper(ks) <= y.tail.upper(ks))


def test_diag_examples(space):
    assert diag_apply(DiagMult.alternating(), CoeffVec([1.0, 1.0, 1.0, 1.0])) == CoeffVec([1.0, -1.0, 1.0, -1.0])
    x = CoeffVec([2.0, 4.0, 6.0])
    y = diag_apply(DiagMult.harmonic(), x)
    assert y == CoeffVec([2.0, 2.0, 2.0])
    for i in (1, 2, 3):
        assert seminorm(y, i, space).value <= seminorm(x, i, space).value


def test_diag_rejects_understated_sup_norm():
    with pytest.raises(ValueError):
        DiagMult(lambda k: 2.0 * np.ones(k.shape), 1.0)


def test_diag_bound_over_random_pairs(space):
    rng = np.random.default_rng(20240917)
    violations = 0
    for _ in range(DRAWS):
        n = int(rng.integers(1, 40))
        lam = DiagMult.table(rng.uniform(-3.0, 3.0, n))
        x = CoeffVec(rng.normal(0.0, 10.0, n))
        y = diag_apply(lam, x)
        for i in INDICES:
            lhs = seminorm(y, i, space).value
            rhs = lam.sup_norm * seminorm(x, i, space).value
            violations += lhs > rhs * ULP_SLACK
    assert violations == 0


def test_interval_estimate_over_random_triples(space):
    rng = np.random.default_rng(31)
    violations = 0
    for _ in range(DRAWS):
        n = int(rng.integers(1, 40))
        a = rng.normal(0.0, 5.0, n)
        b = a + rng.exponential(3.0, n)
        box = OrderInterval(CoeffVec(a), CoeffVec(b))
        x = box.sample(rng)
        assert box.contains(x)
        for i in INDICES:
            lhs = seminorm(x, i, space).value
            rhs = box.seminorm_bound(i, space)
            violations += lhs > rhs * ULP_SLACK
    assert violations == 0


# --- suprema ---


def test_coordwise_sup_examples():
    upper = CoeffVec([10.0, 10.0])
    assert coordwise_sup([CoeffVec([1.0, 5.0]), CoeffVec([3.0, 2.0])], upper) == CoeffVec([3.0, 5.0])
    x = CoeffVec([0.5, -1.0])
    assert coordwise_sup([x], upper) == x
    out = coordwise_sup(
        [CoeffVec([0.0, -1.0, 2.0]), CoeffVec([1.0, -3.0, 2.0])], CoeffVec([1.0, 0.0, 2.0])
    )
    assert out == CoeffVec([1.0, -1.0, 2.0])


def test_coordwise_sup_errors():
    with pytest.raises(EmptySupremumError, match="sup of empty set undefined"):
        coordwise_sup([], CoeffVec.zero())
    with pytest.raises(NoUpperBoundError, match="no upper bound"):
        coordwise_sup([CoeffVec([0.0]), CoeffVec([2.0])], CoeffVec([1.0]))


def test_coordwise_sup_of_different_tails_is_pinched():
    upper = CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1))
    a = CoeffVec.from_anchor(AnchorSeq.poly(-1.0, 1), prefix=[0.0])
    b = CoeffVec.from_anchor(AnchorSeq.constant(-1.0), prefix=[-1.0])
    out = coordwise_sup([a, b], upper)
    assert out.prefix.tolist() == [0.0]
    assert out.tail.kind == TailKind.PINCHED
    assert out.tail.upper == upper.tail.upper
    lower = out.lower_values(50)
    assert np.all(lower >= a.values(50)) and np.all(lower >= b.values(50))
    assert np.all(out.upper_values(50) <= upper.values(50))


@seed(3)
@given(vs=st.lists(arrays(np.float64, 4, elements=finite), min_size=1, max_size=6))
def test_coordwise_sup_is_least_upper_bound(vs):
    upper = CoeffVec(np.max(vs, axis=0) + 1.0)
    out = coordwise_sup([CoeffVec(v) for v in vs], upper)
    assert all(leq(CoeffVec(v), out) for v in vs)
    np.testing.assert_array_equal(out.prefix, np.max(vs, axis=0))


def test_coordwise_sup_with_a_short_pinched_prefix():
    upper = CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1))
    pinched = diag_apply(DiagMult.constant(1.0), CoeffVec.from_anchor(AnchorSeq.poly(-1.0, 1)))
    longer = CoeffVec.from_anchor(AnchorSeq.poly(-1.0, 1), prefix=[0.0, 0.0])
    out = coordwise_sup([pinched, longer], upper)
    assert out.n == 0
    assert out.tail.kind == TailKind.PINCHED
    known_lower = np.maximum(pinched.lower_values(20), longer.lower_values(20))
    assert np.all(out.lower_values(20) <= known_lower)
    assert np.all(out.lower_values(20) >= pinched.lower_values(20))
    assert np.all(out.upper_values(20) >= known_lower)
    assert np.all(out.upper_values(20) <= upper.values(20))


def test_truncated_folds_dropped_coordinates_into_the_tail():
    x = CoeffVec.from_anchor(AnchorSeq.constant(1.0), prefix=[4.0, -3.0, 2.0])
    cut = x.truncated(1)
    assert cut.prefix.tolist() == [4.0]
    assert cut.lower_values(5).tolist() == [4.0, -3.0, -3.0, -3.0, -3.0]
    assert cut.upper_values(5).tolist() == [4.0, 2.0, 2.0, 2.0, 2.0]
    assert x.truncated(3) is x


# --- vectors and intervals ---


def test_pinched_tail_cannot_be_materialized():
    x = CoeffVec([1.0], Tail.pinched(AnchorSeq.zero(), AnchorSeq.constant(1.0)))
    with pytest.raises(AnchorError):
        x.values(3)
    assert x.lower_values(3).tolist() == [1.0, 0.0, 0.0]
    assert x.upper_values(3).tolist() == [1.0, 1.0, 1.0]


def test_coeffvec_arithmetic_keeps_tails_exact():
    x = CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1), prefix=[5.0])
    y = CoeffVec.from_anchor(AnchorSeq.poly(-1.0, 1))
    z = x + y
    assert z.tail.kind == TailKind.ZERO
    assert z.values(4).tolist() == [4.0, 0.0, 0.0, 0.0]
    assert (2 * x).value_at(3) == 8.0
    assert (x - x).values(3).tolist() == [0.0, 0.0, 0.0]


def test_addition_with_a_short_pinched_prefix():
    pinched = CoeffVec([1.0], Tail.pinched(AnchorSeq.zero(), AnchorSeq.constant(1.0)))
    z = pinched + CoeffVec([1.0, 1.0, 1.0])
    assert z.prefix.tolist() == [2.0]
    assert z.lower_values(4).tolist() == [2.0, 0.0, 0.0, 0.0]
    assert z.upper_values(4).tolist() == [2.0, 2.0, 2.0, 2.0]


def test_frechet_metric(space):
    x = CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1), prefix=[1.0, 2.0])
    d = frechet_metric(x, x, space)
    assert d.value == 0.0
    e = frechet_metric(x, CoeffVec.zero(), space)
    assert 0.0 < e.value <= 1.0
    assert e.tail_bound >= 2.0**-8 - 1e-15


def test_order_interval_rejects_unordered_endpoints():
    with pytest.raises(ValueError):
        OrderInterval(CoeffVec([1.0]), CoeffVec([0.0]))


def test_truncation_radius_shrinks_with_depth(space):
    box = OrderInterval(
        CoeffVec.from_anchor(AnchorSeq.poly(-1.0, 1)),
        CoeffVec.from_anchor(AnchorSeq.poly(1.0, 1)),
    )
    radii = [box.truncation_radius(n, 1, space) for n in (0, 4, 16)]
    assert radii[0] == pytest.approx(4.0, abs=1e-10)
    assert radii[0] > radii[1] > radii[2] > 0.0
