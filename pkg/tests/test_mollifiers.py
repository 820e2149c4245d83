import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from molluni.mollifiers import Family, MollifierSpec
from molluni.numerics import integrate

FAMILIES = list(Family)
SPECS = [MollifierSpec(f, s) for f in FAMILIES for s in (0.01, 0.1, 1.0)]


def _ids(spec):
    return f"{spec.family.value}-{spec.scale:g}"


def _quad(spec, g):
    # support is effectively +-60 scales for every family
    span = 60.0 * spec.scale
    return integrate(lambda x: g(x) * spec.pdf(x), -span, span, tol=1e-13, points=[0.0]).value


def test_pdf_examples():
    assert MollifierSpec.logistic(1.0).pdf(0.0) == pytest.approx(0.25, rel=1e-15)
    assert MollifierSpec.laplace(1.0).pdf(0.0) == pytest.approx(0.5, rel=1e-15)
    assert MollifierSpec.normal(2.0).pdf(0.0) == pytest.approx(0.19947114020071634, rel=1e-15)


def test_pdf_far_tail_is_finite():
    for spec in SPECS:
        v = spec.pdf(700.0 * spec.scale)
        assert 0.0 <= v < 1e-100


def test_cdf_examples():
    assert MollifierSpec.logistic(0.1).cdf(0.0) == 0.5
    assert MollifierSpec.logistic(1.0).cdf(math.log(3.0)) == pytest.approx(0.75, rel=1e-15)
    assert MollifierSpec.laplace(1.0).cdf(-math.inf) == 0.0
    assert MollifierSpec.laplace(1.0).cdf(math.inf) == 1.0


@pytest.mark.parametrize("spec", SPECS, ids=_ids)
def test_pdf_is_symmetric_and_normalized(spec):
    x = np.linspace(0, 10 * spec.scale, 57)
    np.testing.assert_array_equal(spec.pdf(x), spec.pdf(-x))
    assert _quad(spec, lambda x: 1.0) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("spec", SPECS, ids=_ids)
def test_cdf_matches_integrated_pdf(spec):
    for x in np.array([-3.0, -0.7, 0.2, 1.9]) * spec.scale:
        ref = integrate(spec.pdf, -60 * spec.scale, x, tol=1e-13, points=[0.0] if x > 0 else None).value
        assert spec.cdf(x) == pytest.approx(ref, abs=1e-12)
        assert spec.sf(x) == pytest.approx(1.0 - ref, abs=1e-12)


def test_even_moment_examples():
    c = 0.37
    spec = MollifierSpec.logistic(c)
    assert spec.even_moment(2) == pytest.approx(math.pi**2 * c**2 / 3, rel=1e-15)
    assert spec.even_moment(4) == pytest.approx(7 * math.pi**4 * c**4 / 15, rel=1e-15)
    assert MollifierSpec.normal(1.0).even_moment(6) == 15.0
    assert MollifierSpec.laplace(2.0).even_moment(4) == 24 * 16
    assert spec.even_moment(0) == 1.0


@pytest.mark.parametrize("spec", [MollifierSpec(f, 0.3) for f in FAMILIES], ids=_ids)
@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_even_moment_matches_quadrature(spec, k):
    assert spec.even_moment(k) == pytest.approx(_quad(spec, lambda x: x**k), rel=1e-8)


def test_logistic_high_orders_match_quadrature():
    spec = MollifierSpec.logistic(1.0)
    for k in (10, 12, 16):
        ref = integrate(lambda x: x**k * spec.pdf(x), 0.0, 200.0, tol=1e-14).value * 2
        assert spec.even_moment(k) == pytest.approx(ref, rel=1e-9)


def test_moment_order_checks():
    spec = MollifierSpec.normal(1.0)
    assert spec.moment(3) == 0.0
    for bad in (3, -2, 62, 2.0):
        with pytest.raises(ValueError):
            spec.even_moment(bad)


def test_variance_and_kurtosis_table():
    assert MollifierSpec.logistic(0.2).kurtosis == pytest.approx(21 / 5)
    assert MollifierSpec.laplace(1.0).variance_and_kurtosis() == (2.0, 6.0)
    assert MollifierSpec.normal(0.5).variance_and_kurtosis() == (0.25, 3.0)


@pytest.mark.parametrize("spec", SPECS, ids=_ids)
def test_kurtosis_consistent_with_moments(spec):
    v, kappa = spec.variance_and_kurtosis()
    assert v == pytest.approx(spec.even_moment(2), rel=1e-15)
    assert kappa == pytest.approx(spec.even_moment(4) / spec.even_moment(2) ** 2, abs=1e-12)


@pytest.mark.parametrize("family", FAMILIES)
@given(v=st.floats(min_value=1e-6, max_value=1e3))
def test_from_variance_round_trip(family, v):
    assert MollifierSpec.from_variance(family, v).variance == pytest.approx(v, rel=1e-14)


def test_construction_rejects_bad_scale():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            MollifierSpec.normal(bad)
    with pytest.raises(ValueError):
        Family.parse("cauchy")
    assert Family.parse("Logistic") is Family.LOGISTIC


def test_quantile_examples():
    assert MollifierSpec.logistic(1.0).quantile(0.5) == 0.0
    assert MollifierSpec.laplace(1.0).quantile(0.5) == 0.0
    assert MollifierSpec.logistic(2.0).quantile(0.75) == pytest.approx(2 * math.log(3), rel=1e-15)
    with pytest.raises(ValueError):
        MollifierSpec.normal(1.0).quantile(1.0)


@pytest.mark.parametrize("spec", [MollifierSpec(f, 0.7) for f in FAMILIES], ids=_ids)
def test_quantile_inverts_cdf(spec):
    u = np.linspace(1e-6, 1 - 1e-6, 301)
    np.testing.assert_allclose(spec.cdf(spec.quantile(u)), u, atol=1e-14)


@pytest.mark.parametrize("spec", SPECS, ids=_ids)
def test_integrated_cdf_derivative(spec):
    x = np.linspace(-5, 5, 41) * spec.scale
    h = 1e-4 * spec.scale
    fd = (spec.integrated_cdf(x + h) - spec.integrated_cdf(x - h)) / (2 * h)
    np.testing.assert_allclose(fd, spec.cdf(x), atol=1e-7)


@pytest.mark.parametrize("family", FAMILIES)
def test_sample_moments_within_five_standard_errors(family):
    spec = MollifierSpec(family, 0.5)
    draws = spec.sample(np.random.default_rng(11), 1_000_000)
    n = draws.size
    m2, m4, m8 = spec.even_moment(2), spec.even_moment(4), spec.even_moment(8)
    assert abs(draws.mean()) < 5 * math.sqrt(m2 / n)
    assert abs(np.mean(draws**2) - m2) < 5 * math.sqrt((m4 - m2**2) / n)
    assert abs(np.mean(draws**4) - m4) < 5 * math.sqrt((m8 - m4**2) / n)


def test_sample_is_deterministic():
    spec = MollifierSpec.laplace(0.2)
    a = spec.sample(np.random.default_rng(5), 100)
    b = spec.sample(np.random.default_rng(5), 100)
    np.testing.assert_array_equal(a, b)
