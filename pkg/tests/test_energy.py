import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thermswipt.energy import (
    EhParams,
    average_harvested_closed,
    average_harvested_mc,
    average_harvested_quadrature,
    harvest,
    harvest_array,
    received_power_ccdf,
    received_power_pdf,
)
from thermswipt.quadrature import integrate

EH = EhParams(eta=0.86, p_th=0.5, p_sat=1.5)
DISTS = ("exponential", "uniform")

# E = 1 mW, default harvester, scipy.integrate.quad on the K0 / E1 densities
REF_AT_1MW = {"exponential": 0.4422971010327319, "uniform": 0.5148819731152837}


def test_harvest_regions():
    assert harvest(0.4, EH) == 0.0
    assert harvest(1.0, EH) == pytest.approx(0.86)
    assert harvest(2.0, EH) == pytest.approx(1.29)
    assert harvest(0.5, EH) == 0.0
    assert harvest(1.5, EH) == pytest.approx(0.86 * 1.5)
    with pytest.raises(ValueError):
        harvest(-0.1, EH)


@given(st.floats(0, 10), st.floats(0, 10))
def test_harvest_monotone(a, b):
    lo, hi = sorted((a, b))
    assert harvest(lo, EH) <= harvest(hi, EH) <= EH.ceiling
    np.testing.assert_array_equal(harvest_array([lo, hi], EH), [harvest(lo, EH), harvest(hi, EH)])


@pytest.mark.parametrize("dist", DISTS)
@pytest.mark.parametrize("mean", [0.3, 1.0, 4.0])
def test_pdf_normalization_and_mean(dist, mean):
    total = integrate(lambda x: received_power_pdf(dist, mean, x), 0.0, math.inf, rel_tol=1e-11)
    assert total.value == pytest.approx(1.0, abs=1e-8)
    first = integrate(lambda x: x * received_power_pdf(dist, mean, x), 0.0, math.inf, rel_tol=1e-11)
    assert first.value == pytest.approx(mean, rel=1e-8)


@pytest.mark.parametrize("dist", DISTS)
def test_pdf_special_vs_nested_integral(dist):
    for x in (0.01, 0.3, 1.0, 5.0):
        a = received_power_pdf(dist, 1.7, x)
        b = received_power_pdf(dist, 1.7, x, method="integral")
        assert a == pytest.approx(b, rel=1e-9)


@pytest.mark.parametrize("dist", DISTS)
def test_ccdf_matches_pdf_tail(dist):
    for x in (0.2, 1.5, 6.0):
        tail = integrate(lambda t: received_power_pdf(dist, 2.0, t), x, math.inf, rel_tol=1e-11).value
        assert received_power_ccdf(dist, 2.0, x) == pytest.approx(tail, rel=1e-9)


@pytest.mark.parametrize("dist", DISTS)
def test_reference_value(dist):
    assert average_harvested_quadrature(dist, 1.0, EH).value == pytest.approx(REF_AT_1MW[dist], rel=1e-10)
    assert average_harvested_closed(dist, 1.0, EH).value == pytest.approx(REF_AT_1MW[dist], rel=1e-10)


@pytest.mark.parametrize("dist", DISTS)
def test_closed_form_matches_quadrature_grid(dist):
    for mean in np.arange(0.1, 10.05, 0.1):
        ref = average_harvested_quadrature(dist, mean, EH).value
        assert average_harvested_closed(dist, mean, EH).value == pytest.approx(ref, rel=1e-6)


@pytest.mark.parametrize("dist", DISTS)
def test_closed_form_other_harvesters(dist):
    for eh in (EhParams(0.5, 0.1, 3.0), EhParams(1.0, 0.0, 2.0), EhParams(0.7, 2.0, 2.5)):
        for mean in (0.2, 1.0, 7.0):
            ref = average_harvested_quadrature(dist, mean, eh).value
            assert average_harvested_closed(dist, mean, eh).value == pytest.approx(ref, rel=1e-6)


@pytest.mark.parametrize("dist", DISTS)
def test_unreduced_form_differs_from_quadrature(dist):
    ref = average_harvested_quadrature(dist, 1.0, EH).value
    loose = average_harvested_closed(dist, 1.0, EH, form="unreduced").value
    assert abs(loose / ref - 1) > 1e-3


def test_unreduced_exponential_extra_term():
    # the unreduced expression differs from the reduced one by exactly the
    # sqrt(P_sat)(P_sat - 1) K1 term
    from thermswipt.specfun import bessel_k

    mean = 2.0
    diff = (
        average_harvested_closed("exponential", mean, EH).value
        - average_harvested_closed("exponential", mean, EH, form="unreduced").value
    )
    extra = 2 * EH.eta / math.sqrt(mean) * math.sqrt(EH.p_sat) * (EH.p_sat - 1) * bessel_k(
        1, 2 * math.sqrt(EH.p_sat / mean)
    )
    assert diff == pytest.approx(extra, rel=1e-12)


@pytest.mark.parametrize("dist", DISTS)
def test_limits(dist):
    assert average_harvested_closed(dist, 1e-4, EH).value < 1e-6
    assert average_harvested_closed(dist, 1e3, EH).value == pytest.approx(EH.ceiling, rel=0.02)


@pytest.mark.parametrize("dist", DISTS)
def test_quadrature_edge_cases(dist):
    assert average_harvested_quadrature(dist, 3.0, EhParams(0.0, 0.5, 1.5)).value == 0.0
    eh = EhParams(0.86, 1.5 - 1e-9, 1.5)
    value = average_harvested_quadrature(dist, 2.0, eh).value
    assert value == pytest.approx(eh.eta * eh.p_sat * received_power_ccdf(dist, 2.0, eh.p_sat), rel=1e-7)


@pytest.mark.parametrize("dist", DISTS)
def test_monotone_in_mean(dist):
    vals = [average_harvested_quadrature(dist, m, EH).value for m in np.geomspace(0.1, 20, 20)]
    assert np.all(np.diff(vals) >= 0)
    assert all(0 <= v <= EH.ceiling for v in vals)


def test_mc_degenerate_cases():
    assert average_harvested_mc("exponential", 0.0, EH, 1000, 1).value == 0.0
    linear = EhParams(1.0, 0.0, 1e9)
    est = average_harvested_mc("uniform", 2.5, linear, 10**6, 2)
    assert abs(est.value - 2.5) <= est.abs_error


@pytest.mark.parametrize("dist", DISTS)
def test_mc_matches_quadrature(dist):
    est = average_harvested_mc(dist, 1.0, EH, 10**6, seed=31)
    assert abs(est.value - REF_AT_1MW[dist]) <= est.abs_error
    assert est.method == "monte_carlo"


def test_crossover():
    grid = np.geomspace(0.1, 10, 25)
    diff = np.array([
        average_harvested_closed("exponential", m, EH).value - average_harvested_closed("uniform", m, EH).value
        for m in grid
    ])
    assert diff[0] > 0 and diff[-1] < 0


def test_param_invariants():
    with pytest.raises(ValueError):
        EhParams(eta=1.2)
    with pytest.raises(ValueError):
        EhParams(p_th=2.0, p_sat=1.0)
