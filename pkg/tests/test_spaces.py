"""Spaces: weights, seminorms, series classification, growth conditions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koethe.errors import ConfigurationError, InvariantError, WindowError
from koethe.logdomain import LOG_ZERO
from koethe.spaces import (
    ExponentSequence,
    SeriesClass,
    SpaceDescriptor,
    classify_series,
    gp_probe,
    nuclearity_verdict,
    seminorm_sum,
    seminorm_sup,
    stability_constant,
    subadditivity_constant,
    weight,
    weight_array,
)
from koethe.verdicts import Outcome, Window

ALPHA_N = ExponentSequence.affine(1.0)
ALPHA_N2 = ExponentSequence.power(2.0)
ALPHA_SQRT = ExponentSequence.power(0.5)
ALPHA_LOG = ExponentSequence.logarithmic()

L1_N = SpaceDescriptor.power_series_finite(ALPHA_N)
L1_N2 = SpaceDescriptor.power_series_finite(ALPHA_N2)
L1_LOG = SpaceDescriptor.power_series_finite(ALPHA_LOG)
LINF_N = SpaceDescriptor.power_series_infinite(ALPHA_N)


def space_strategy():
    seq = st.sampled_from([ALPHA_N, ALPHA_N2, ALPHA_SQRT, ALPHA_LOG])
    finite = seq.map(SpaceDescriptor.power_series_finite)
    infinite = seq.map(SpaceDescriptor.power_series_infinite)
    return st.one_of(finite, infinite)


# -- exponent sequences ----------------------------------------------------


def test_exponent_forms():
    assert ExponentSequence.power(0.5).value(4) == 2.0
    assert ExponentSequence.logarithmic().value(1) == math.log(2)
    assert ExponentSequence.affine(2.0, 1.0).value(3) == 7.0
    assert ExponentSequence.table([0.0, 1.0, 5.0]).value(3) == 5.0


def test_exponent_validation():
    with pytest.raises(InvariantError):
        ExponentSequence.power(-1.0)
    with pytest.raises(InvariantError):
        ExponentSequence.table([2.0, 1.0])  # decreasing
    with pytest.raises(InvariantError):
        ExponentSequence.table([-1.0])
    with pytest.raises(InvariantError):
        ExponentSequence.affine(-1.0, 0.0)


def test_table_window_error():
    tab = ExponentSequence.table([0.0, 1.0])
    with pytest.raises(WindowError):
        tab.value(3)
    with pytest.raises(WindowError):
        tab.values_array(10)


def test_exponent_json_roundtrip():
    for seq in (ALPHA_N, ALPHA_N2, ALPHA_LOG, ExponentSequence.table([1.0, 2.0])):
        assert ExponentSequence.from_json(seq.to_json()) == seq


# -- weights -----------------------------------------------------------------


def test_weight_finite_type():
    assert weight(L1_N, 2, 2) == -1.0


def test_weight_infinite_type():
    assert weight(LINF_N, 3, 2) == 6.0


def test_weight_general_table():
    space = SpaceDescriptor.general([[0.5, 0.7], [0.1, 0.2]])
    assert weight(space, 1, 1) == math.log(0.5)
    with pytest.raises(WindowError):
        weight(space, 3, 1)
    with pytest.raises(WindowError):
        weight(space, 1, 3)


def test_general_table_koethe_axioms():
    with pytest.raises(InvariantError):
        SpaceDescriptor.general([[0.0, 0.0]])  # no positive entry in row
    with pytest.raises(InvariantError):
        SpaceDescriptor.general([[0.5, 0.2]])  # decreasing in k
    # zeros are fine while some grading is positive
    space = SpaceDescriptor.general([[0.0, 1.0]])
    assert weight(space, 1, 1) == LOG_ZERO


@settings(max_examples=60)
@given(space=space_strategy(), n=st.integers(1, 200), k=st.integers(1, 10))
def test_weight_monotone_in_grading(space, n, k):
    assert weight(space, n, k) <= weight(space, n, k + 1)


def test_space_json_roundtrip():
    for space in (L1_N, LINF_N, SpaceDescriptor.general([[0.5, 0.7]])):
        assert SpaceDescriptor.from_json(space.to_json()) == space


# -- seminorms ---------------------------------------------------------------


def test_seminorm_basis_vector():
    x = [1.0]
    assert seminorm_sum(L1_N, x, 3, 16) == weight(L1_N, 1, 3)
    assert seminorm_sup(L1_N, x, 3, 16) == weight(L1_N, 1, 3)


def test_seminorm_all_ones_geometric_series():
    # sum_{n<=64} e^{-n} agrees with the closed form 1/(e-1)
    val = seminorm_sum(L1_N, [1.0] * 64, 1, 64)
    assert val == pytest.approx(math.log(1.0 / (math.e - 1.0)), abs=1e-9)


def test_seminorm_zero_vector():
    assert seminorm_sum(L1_N, [0.0, 0.0], 1, 8) == LOG_ZERO
    assert seminorm_sup(L1_N, [], 1, 8) == LOG_ZERO


def test_seminorm_sup_examples():
    assert seminorm_sup(L1_N, [1.0] * 64, 1, 64) == -1.0
    assert seminorm_sup(LINF_N, [1.0, 2.0], 1, 8) == pytest.approx(
        math.log(2.0) + 2.0)


def test_seminorm_support_outside_truncation():
    with pytest.raises(InvariantError):
        seminorm_sum(L1_N, [1.0, 1.0, 1.0], 1, 2)
    # trailing zeros beyond the truncation are tolerated
    assert seminorm_sum(L1_N, [1.0, 0.0, 0.0], 1, 2) == weight(L1_N, 1, 1)


coefficients = st.lists(
    st.floats(min_value=1e-3, max_value=1e3), min_size=1, max_size=64
)


@settings(max_examples=100, deadline=None)
@given(x=coefficients, k=st.integers(1, 8))
def test_seminorm_matches_linear_reference(x, k):
    # log-domain correctness on the benign band
    n_max = len(x)
    w = weight_array(L1_N, k, n_max)
    expected = math.fsum(abs(v) * math.exp(w[i]) for i, v in enumerate(x))
    got = seminorm_sum(L1_N, x, k, n_max)
    assert math.exp(got) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(x=coefficients, k=st.integers(1, 6), space=space_strategy())
def test_seminorm_grading_monotone_and_sup_bound(x, k, space):
    n_max = len(x)
    assert seminorm_sum(space, x, k, n_max) <= seminorm_sum(space, x, k + 1, n_max)
    assert seminorm_sup(space, x, k, n_max) <= seminorm_sum(space, x, k, n_max)


# -- series classification ---------------------------------------------------


def test_classify_geometric_convergent():
    terms = -np.arange(1, 61, dtype=float)  # e^{-n}
    verdict = classify_series(terms)
    assert verdict.classification is SeriesClass.CONVERGENT
    assert math.exp(verdict.limit_log) == pytest.approx(1 / (math.e - 1), abs=1e-9)


def test_classify_divergent_growth():
    terms = np.arange(1, 129, dtype=float)  # e^{+n}
    assert classify_series(terms).classification is SeriesClass.DIVERGENT


def test_classify_needs_terms():
    with pytest.raises(ConfigurationError):
        classify_series(np.array([1.0]))


def test_partial_sums_nondecreasing():
    terms = -0.5 * np.arange(1, 200, dtype=float)
    sums = [s for _, s in classify_series(terms).partial_sums]
    assert all(a <= b for a, b in zip(sums, sums[1:]))


# -- nuclearity probes --------------------------------------------------------


def test_gp_probe_requires_l_above_k():
    with pytest.raises(ConfigurationError):
        gp_probe(LINF_N, 2, 2, 64)


def test_gp_probe_infinite_type_geometric():
    verdict = gp_probe(LINF_N, 1, 2, 60)
    assert verdict.classification is SeriesClass.CONVERGENT
    assert math.exp(verdict.limit_log) == pytest.approx(1 / (math.e - 1), abs=1e-9)


def test_gp_probe_log_exponents_diverge():
    verdict = gp_probe(L1_LOG, 1, 2, 4096)
    assert verdict.classification is SeriesClass.DIVERGENT


def test_gp_probe_finite_type_geometric():
    verdict = gp_probe(L1_N, 1, 2, 4096)
    assert verdict.classification is SeriesClass.CONVERGENT
    assert math.exp(verdict.limit_log) == pytest.approx(
        1 / (math.exp(0.5) - 1), rel=1e-9)


@pytest.mark.parametrize("space,expected", [
    (LINF_N, Outcome.HOLDS),
    (L1_N, Outcome.HOLDS),
    (L1_LOG, Outcome.FAILS_ON_WINDOW),
])
def test_nuclearity_verdicts(space, expected):
    assert nuclearity_verdict(space, Window()).outcome is expected


def test_gp_classification_stable_under_doubling():
    for n_max in (512, 1024, 2048):
        assert gp_probe(L1_N, 1, 2, n_max).classification is SeriesClass.CONVERGENT
        assert gp_probe(L1_LOG, 1, 2, n_max).classification is SeriesClass.DIVERGENT


# -- growth conditions --------------------------------------------------------


def test_subadditivity_linear_is_exact():
    report = subadditivity_constant(ALPHA_N, 2000)
    assert report.m == 1
    assert report.max_ratio == pytest.approx(1.0)


def test_subadditivity_sqrt():
    assert subadditivity_constant(ALPHA_SQRT, 10_000).m == 1


@pytest.mark.parametrize("p", [1 / 3, 1 / 4])
def test_subadditivity_roots(p):
    report = subadditivity_constant(ExponentSequence.power(p), 4096)
    assert report.m is not None and report.m <= 2


def test_subadditivity_squares():
    report = subadditivity_constant(ALPHA_N2, 10_000)
    assert report.m == 2
    assert report.note == "window certificate"


def test_subadditivity_m_max_exceeded():
    # alpha with a huge jump forces a large constant
    tab = ExponentSequence.table([0.0] + [1e-9] * 8 + [100.0])
    report = subadditivity_constant(tab, 10, m_max=4)
    assert report.m is None
    assert report.witness is not None


def test_subadditivity_independent_of_m_max_once_found():
    for m_max in (2, 8, 64):
        assert subadditivity_constant(ALPHA_N2, 512, m_max).m == 2


def test_stability_constants():
    assert stability_constant(ALPHA_N, 4096) == 2.0
    assert stability_constant(ALPHA_N2, 4096) == 4.0
    got = stability_constant(ALPHA_LOG, 10_000)
    assert got == pytest.approx(math.log(3) / math.log(2))
    assert 1.0 < got <= 2.0


@pytest.mark.parametrize("alpha", [ALPHA_N, ALPHA_N2, ALPHA_SQRT, ALPHA_LOG])
def test_subadditive_window_bound_implies_stability_bound(alpha):
    n_max = 2048
    report = subadditivity_constant(alpha, n_max)
    assert report.m is not None
    assert stability_constant(alpha, n_max) <= 2 * report.m


def test_subadditivity_short_table_range_error():
    tab = ExponentSequence.table([0.0, 1.0])
    with pytest.raises(WindowError):
        subadditivity_constant(tab, 100)
