import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from headvisor.coefficients import K_DEC, K_LOGN, K_REAL, PRECISION, SECURITY, FIPS
from headvisor.fuzzy import (
    EmptyConsequentError,
    FuzzyError,
    FuzzySet,
    Level,
    LinguisticVariable,
    MembershipFunction,
    RuleMatrix,
    defuzzify_centroid,
    fuzzify,
    infer,
)


def sampled_centroid(var, act, n=100_000):
    """Midpoint-rule centroid of max_k min(act_k, mf_k) on the variable domain."""
    lo, hi = var.domain
    h = (hi - lo) / n
    x = lo + h * (np.arange(n) + 0.5)
    y = np.zeros(n)
    for a, mf in zip(act, var.levels):
        b, p, e = mf.kernel_breakpoints
        m = np.ones(n)
        if math.isfinite(b):
            m = np.where(x < p, np.clip((x - b) / (p - b), 0, 1), m)
        if math.isfinite(e):
            m = np.where(x > p, np.clip((e - x) / (e - p), 0, 1), m)
        y = np.maximum(y, np.minimum(a, m))
    return float((x * y).sum() / y.sum())


# -- membership / fuzzify ---------------------------------------------------

def test_fuzzify_examples():
    assert fuzzify(5.0, PRECISION) == (0, 0, 1.0, 0, 0)
    assert fuzzify(0.0, PRECISION) == (1.0, 0, 0, 0, 0)
    assert fuzzify(3.75, PRECISION) == pytest.approx((0, 0.5, 0.5, 0, 0))


def test_fuzzify_clamps_out_of_domain():
    assert fuzzify(-3, PRECISION) == fuzzify(0, PRECISION)
    assert fuzzify(42, PRECISION) == fuzzify(10, PRECISION)


def test_membership_rejects_bad_breakpoints():
    with pytest.raises(FuzzyError):
        MembershipFunction("triangle", 3, 2, 4)
    with pytest.raises(FuzzyError):
        MembershipFunction("triangle", -math.inf, 0, 1)
    with pytest.raises(FuzzyError):
        MembershipFunction("bell", 0, 1, 2)


def test_variable_rejects_gap():
    ivs = [(-math.inf, 0, 1), (0, 1, 2), (1, 2, 3), (3.5, 4, 5), (4, 5, math.inf)]
    with pytest.raises(FuzzyError, match="gap"):
        LinguisticVariable.from_intervals("gappy", ivs)


def test_variable_needs_five_levels():
    with pytest.raises(FuzzyError):
        LinguisticVariable.from_intervals("short", [(-math.inf, 0, 1), (0, 1, math.inf)])


@given(st.floats(0, 10))
def test_ruspini_partition(x):
    mu = fuzzify(x, PRECISION)
    assert all(0.0 <= m <= 1.0 for m in mu)
    assert sum(mu) == pytest.approx(1.0, abs=1e-12)
    assert sum(m > 0 for m in mu) <= 2


# -- inference --------------------------------------------------------------

def _const(level):
    return RuleMatrix(tuple(tuple(level for _ in range(5)) for _ in range(5)))


def test_infer_single_rule():
    rules = RuleMatrix.from_offset(0, 0)  # every cell M
    fs = infer(rules, (0, 0, 1, 0, 0), (0, 0, 1, 0, 0), K_REAL)
    assert fs.activations == (0, 0, 1.0, 0, 0)


def test_infer_constant_matrix():
    fs = infer(_const(Level.VH), (1, 0, 0, 0, 0), (1, 0, 0, 0, 0), K_REAL)
    assert fs.activations == (0, 0, 0, 0, 1.0)


def test_infer_two_cells():
    rules = RuleMatrix.parse("M M M M M / L L L L L / M M M M M / M M M M M / M M M M M")
    fs = infer(rules, (0, 0.5, 0.5, 0, 0), (0, 0, 1, 0, 0), K_REAL)
    assert fs.activations == pytest.approx((0, 0.5, 0.5, 0, 0))


def test_infer_rejects_wrong_length():
    with pytest.raises(FuzzyError):
        infer(_const(Level.M), (1, 0, 0), (1, 0, 0, 0, 0), K_REAL)


def test_rule_matrix_shape():
    with pytest.raises(FuzzyError):
        RuleMatrix.parse("M M / L L")


# -- defuzzification ---------------------------------------------------------

def test_symmetric_centroids():
    assert defuzzify_centroid(FuzzySet(K_REAL, (0, 0, 1, 0, 0))) == pytest.approx(15.0, abs=1e-12)
    assert defuzzify_centroid(FuzzySet(K_DEC, (0, 0, 1, 0, 0))) == pytest.approx(36.0, abs=1e-12)


def test_half_medium_half_high():
    v = defuzzify_centroid(FuzzySet(PRECISION, (0, 0, 0.5, 0.5, 0)))
    assert 5.0 < v < 7.5
    assert v == pytest.approx(sampled_centroid(PRECISION, (0, 0, 0.5, 0.5, 0)), abs=1e-6)


def test_empty_consequent():
    with pytest.raises(EmptyConsequentError):
        defuzzify_centroid(FuzzySet(K_REAL, (0, 0, 0, 0, 0)))


def test_centroid_matches_sampling_oracle():
    rng = np.random.default_rng(7)
    worst = 0.0
    for var in (K_REAL, K_DEC, K_LOGN, PRECISION):
        for _ in range(50):
            act = rng.random(5) * (rng.random(5) < 0.7)
            if not act.any():
                act[rng.integers(5)] = rng.random() + 0.01
            got = defuzzify_centroid(FuzzySet(var, tuple(act)))
            worst = max(worst, abs(got - sampled_centroid(var, act)) / (var.domain[1] - var.domain[0]))
    assert worst <= 1e-6


@settings(max_examples=60)
@given(st.lists(st.floats(0, 1), min_size=5, max_size=5).filter(lambda a: max(a) > 1e-3))
def test_centroid_strictly_inside_domain(act):
    lo, hi = K_DEC.domain
    v = defuzzify_centroid(FuzzySet(K_DEC, tuple(act)))
    assert lo < v < hi


# -- FIPs ---------------------------------------------------------------------

def test_fip_examples():
    assert FIPS["initial-real"](5, 5) == pytest.approx(15.0, abs=1e-9)
    assert FIPS["initial-dec"](5, 5) == pytest.approx(36.0, abs=1e-9)
    assert FIPS["k-logN"](5, 5) == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("fip_id", sorted(FIPS))
def test_fip_continuity(fip_id):
    fip = FIPS[fip_id]
    xs = np.linspace(*fip.x.domain, 201)
    ys = np.linspace(*fip.y.domain, 201)
    z = np.array([[fip(x, y) for y in ys] for x in xs])
    span = fip.out.domain[1] - fip.out.domain[0]
    # unit-scaled jumps between neighbouring grid points
    assert np.abs(np.diff(z, axis=0)).max() / span < 0.5 / 10
    assert np.abs(np.diff(z, axis=1)).max() / span < 0.5 / 10


def test_security_variable_matches_precision_shape():
    for x in np.linspace(0, 10, 41):
        assert fuzzify(x, SECURITY) == fuzzify(x, PRECISION)
