import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspforms.cusp import CuspBand, band_annulus, band_norm_sq
from cuspforms.errors import (
    InsufficientSamplesError,
    NormOverflowError,
    ParameterOrderError,
    PeriodMismatchError,
    PreconditionError,
)
from cuspforms.exhaustion import (
    INEQUALITY_NAMES,
    GrowthRecord,
    SingularityTag,
    absolute_bc_representative,
    classify,
    coefficient_class,
    growth_scan,
    inequality_suite,
    core_bound_family,
    log_rho_list,
    records_to_csv,
)
from cuspforms.glue import alpha_norm_sq
from cuspforms.laurent import TWO_PI, LaurentSeries, dt_series, norm_sq, period, term_norm_sq
from cuspforms.sampling import CLASS_NAMES, random_classified_series, random_regular_data

S = LaurentSeries.from_dict
RHO = log_rho_list(1e-1, 1e-6)
REMOVABLE, LOG, POWER = SingularityTag.REMOVABLE_MOD_PDT, SingularityTag.LOG_DIVERGENT, SingularityTag.POWER_DIVERGENT


def test_log_rho_list():
    assert len(RHO) == 11 and RHO[0] == 0.1 and RHO[-1] == pytest.approx(1e-6, rel=1e-15)
    assert len(log_rho_list(1e-1, 1e-4, 7)) == 7
    with pytest.raises(PreconditionError):
        log_rho_list(1e-6, 1e-1)


# -- growth scans -----------------------------------------------------------------


def test_scan_dt():
    rec = growth_scan(dt_series(1.0), RHO)
    expected = np.log(1 / np.array(RHO)) / TWO_PI
    np.testing.assert_allclose(rec.norm_values, expected, rtol=4e-16, atol=0)
    assert rec.p == pytest.approx(1.0, rel=1e-16)


def test_scan_constant():
    rec = growth_scan(S({0: 1}), RHO)
    # pi (1 - rho^2): the relative deficit is rho^2, at most 1e-6 from rho = 1e-3 on
    for rho, v in zip(RHO, rec.norm_values):
        assert v / math.pi - 1.0 == pytest.approx(-rho ** 2, rel=1e-6, abs=1e-15)


def test_scan_inverse_square():
    rec = growth_scan(S({-2: 1}), RHO)
    for k in range(len(RHO) - 1):
        ratio = rec.norm_values[k + 1] / rec.norm_values[k]
        expected = (RHO[k] / RHO[k + 1]) ** 2
        assert ratio / expected == pytest.approx(1.0, abs=1e-6 if RHO[k] <= 1e-3 else 0.02)
    assert rec.norm_values[-1] * RHO[-1] ** 2 / math.pi == pytest.approx(1.0, abs=1e-11)


def test_scan_ring_norms_are_increments():
    s = S({-3: 1e-4, -1: 0.3 - 1j, 2: 0.5})
    rec = growth_scan(s, RHO)
    inc = np.diff(rec.norm_values)
    np.testing.assert_allclose(rec.band_values, inc, rtol=1e-10)


def test_scan_validation():
    with pytest.raises(PreconditionError):
        growth_scan(dt_series(1.0), [0.1, 0.2])
    with pytest.raises(PreconditionError):
        growth_scan(dt_series(1.0), [1.0, 0.5])
    with pytest.raises(NormOverflowError):
        growth_scan(S({-200: 1}), RHO)


def test_growth_record_validation():
    with pytest.raises(ValueError):
        GrowthRecord((0.1, 0.01), (1.0,), 0.0)
    with pytest.raises(PreconditionError):
        GrowthRecord((0.01, 0.1), (1.0, 2.0), 0.0)


@settings(max_examples=40)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(CLASS_NAMES))
def test_scan_monotone(seed, kind):
    s = random_classified_series(np.random.default_rng(seed), kind)
    vals = growth_scan(s, RHO).norm_values
    assert all(b >= a for a, b in zip(vals, vals[1:]))


# -- classification ---------------------------------------------------------------


def test_classify_examples():
    s = dt_series(2.7) + S({0: 0.4 - 0.1j, 3: -0.9j})
    assert classify(growth_scan(s, RHO), s).tag is REMOVABLE
    s = S({-1: 1})
    c = classify(growth_scan(s, RHO), s)
    assert c.tag is LOG and period(s) == 0.0
    assert c.fitted_log_coefficient == pytest.approx(TWO_PI, rel=1e-9)
    s = S({-1: -1j, -2: 1e-6})
    assert classify(growth_scan(s, RHO), s).tag is POWER


@pytest.mark.parametrize("terms,tag", [
    ({-2: 1e-8}, POWER),
    ({-10: 1e-8}, POWER),
    ({-1: 1e-8}, LOG),
    ({-1: -1e-8}, LOG),
    ({-1: 1e-8j}, REMOVABLE),
    ({0: 1.0, 10: 1.0}, REMOVABLE),
])
def test_classify_adversarial(terms, tag):
    s = dt_series(5.0) + S(terms)
    verdict = classify(growth_scan(s, RHO), s)
    assert verdict.tag is tag and verdict.agrees


def test_coefficient_class_threshold():
    assert coefficient_class(S({-2: 1e-13})) is REMOVABLE
    assert coefficient_class(S({-2: 1e-11})) is POWER
    assert coefficient_class(S({-1: 2e-12 - 1j})) is LOG


@settings(max_examples=150)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(CLASS_NAMES))
def test_classify_agrees_with_coefficients(seed, kind):
    s = random_classified_series(np.random.default_rng(seed), kind)
    verdict = classify(growth_scan(s, RHO), s)
    assert verdict.tag.value == kind == verdict.coefficient_tag.value


@settings(max_examples=60)
@given(st.integers(0, 2 ** 32 - 1))
def test_removable_log_coefficient(seed):
    s = random_classified_series(np.random.default_rng(seed), "REMOVABLE_MOD_PDT")
    c = classify(growth_scan(s, RHO), s).fitted_log_coefficient
    ref = TWO_PI * s[-1].imag ** 2
    assert abs(c - ref) <= max(1e-6 * ref, 1e-15)


def test_fitted_constant_converges():
    s = dt_series(1.5) + S({0: 0.7, 1: 0.2j})
    ds = [classify(growth_scan(s, log_rho_list(1e-1, stop)), s).fitted_constant for stop in (1e-4, 1e-5, 1e-6, 1e-8)]
    steps = np.abs(np.diff(ds))
    # Cauchy: successive changes shrink like rho_min^2
    assert np.all(steps[1:] <= 0.02 * steps[:-1]) and steps[-1] <= 1e-11
    # the limit: plateau norm of the regular part over the unit disk, plus the dt norm's zero offset
    assert ds[-1] == pytest.approx(math.pi * 0.49 + math.pi / 2 * 0.04, rel=1e-9)


@pytest.mark.parametrize("rho", [(0.1, 0.01, 0.001), (0.1, 0.01, 0.001, 0.0005), log_rho_list(1e-1, 1e-3)])
def test_classify_needs_deep_samples(rho):
    with pytest.raises(InsufficientSamplesError):
        classify(growth_scan(dt_series(1.0), rho))


def test_classify_needs_log_uniform_tail():
    rho = (0.1, 0.01, 0.001, 1e-4, 3e-5, 1e-6)
    with pytest.raises(InsufficientSamplesError):
        classify(growth_scan(dt_series(1.0), rho))


def test_classify_without_series():
    c = classify(growth_scan(dt_series(1.0), RHO))
    assert c.coefficient_tag is None and c.agrees is None and c.tag is REMOVABLE


# -- inequality suite ---------------------------------------------------------------


def test_absolute_bc_normal_component_vanishes():
    R = 1.3
    s = absolute_bc_representative(2.0, R, {0: 0.3, 2: 0.01j})
    rho = math.exp(-TWO_PI * R)
    z = rho * np.exp(1j * np.linspace(0, TWO_PI, 17))
    from cuspforms.laurent import evaluate

    assert np.max(np.abs((z * evaluate(s, z)).real)) <= 1e-15
    assert period(s) == pytest.approx(2.0, rel=1e-15)


def test_absolute_bc_beats_competitors(rng):
    # same period and same regular data: the boundary-adapted form has least norm on the band
    R, p = 2.0, 1.7
    reg = random_regular_data(rng)
    best = absolute_bc_representative(p, R, reg)
    band = band_annulus(CuspBand(-math.log(2), R))
    base = norm_sq(best, band)
    for _ in range(50):
        pert = {-n: complex(*rng.uniform(-1e-8, 1e-8, 2)) for n in range(2, 8)}
        pert[-1] = complex(rng.uniform(-0.1, 0.1), 0.0)
        assert norm_sq(best + S(pert), band) >= base


def test_suite_dt_has_zero_eq5_slack():
    recs = inequality_suite(dt_series(2.0), 2.0, 0.0, 1.0, 2.0)
    assert [r.name for r in recs] == list(INEQUALITY_NAMES)
    byname = {r.name: r for r in recs}
    assert byname["dt_minimal"].slack == 0.0 and byname["dt_minimal_tail"].slack == 0.0
    assert all(r.passed for r in recs)


def test_suite_eq5_slack_is_parseval():
    p, a, R = 2.0, 0.5, 3.0
    recs = inequality_suite(dt_series(p) + S({2: 1}), p, a, 1.0, R)
    dt_minimal = next(r for r in recs if r.name == "dt_minimal")
    assert dt_minimal.slack == pytest.approx(term_norm_sq(2, 1, band_annulus(CuspBand(a, R))), rel=1e-9)
    assert dt_minimal.slack > 0


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([(0.0, 1.0, 2.0), (1.0, 2.0, 8.0), (0.0, 0.0, 4.0), (1.0, 1.0, 1.0)]))
def test_suite_random_absolute_bc(seed, ar):
    a, r, R = ar
    rng = np.random.default_rng(seed)
    p = float(rng.uniform(-5, 5))
    s = absolute_bc_representative(p, R, random_regular_data(rng))
    recs = inequality_suite(s, p, a, r, R)
    assert all(rec.slack >= -1e-10 for rec in recs)
    byname = {rec.name: rec for rec in recs}
    # global minimality slack is the squared distance to the glued competitor, never negative
    assert byname["minimality"].slack >= 0.0


def test_suite_parameter_order():
    with pytest.raises(ParameterOrderError):
        inequality_suite(dt_series(1.0), 1.0, 2.0, 1.0, 3.0)
    with pytest.raises(ParameterOrderError):
        inequality_suite(dt_series(1.0), 1.0, -1.0, 1.0, 3.0)
    with pytest.raises(ParameterOrderError):
        inequality_suite(dt_series(1.0), 1.0, 0.0, 0.0, 0.0)


def test_suite_period_mismatch():
    with pytest.raises(PeriodMismatchError):
        inequality_suite(dt_series(1.0), 2.0, 0.0, 1.0, 2.0)


def test_suite_core_norm_override():
    recs = inequality_suite(dt_series(1.0), 1.0, 0.0, 1.0, 2.0, core_norm=0.0)
    assert not next(r for r in recs if r.name == "minimality").passed
    with pytest.raises(PreconditionError):
        inequality_suite(dt_series(1.0), 1.0, 0.0, 1.0, 2.0, core_norm=-1.0)


def test_suite_default_core_norm():
    s = absolute_bc_representative(1.0, 2.0, {0: 0.01})
    recs = inequality_suite(s, 1.0, 0.0, 1.0, 2.0)
    collar_core_bound = next(r for r in recs if r.name == "collar_core_bound")
    assert collar_core_bound.rhs == pytest.approx(alpha_norm_sq(s, 1.0) + band_norm_sq(dt_series(1.0), CuspBand(0.0, 1.0)))


@pytest.mark.parametrize("a", [0.0, 1.0])
def test_core_bound_constant_in_R(a):
    fam = core_bound_family(2.0, a, [1.0, 2.0, 4.0, 8.0])
    lhs = [f[1] for f in fam]
    rhs = [f[2] for f in fam]
    assert max(lhs) - min(lhs) <= 1e-10 and max(rhs) - min(rhs) <= 1e-10


def test_records_csv():
    text = records_to_csv(inequality_suite(dt_series(1.0), 1.0, 0.0, 1.0, 2.0))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == len(INEQUALITY_NAMES)
    assert set(rows[0]) == {"name", "a", "r", "R", "p", "lhs", "rhs", "slack", "pass"}
    assert rows[0]["name"] == "dt_minimal" and float(rows[0]["lhs"]) == 2.0
