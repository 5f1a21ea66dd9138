import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thermswipt import specfun
from thermswipt.specfun import bessel_k, exp1, q_function, q_scaled, upper_incomplete_gamma

mp.mp.dps = 30

# Reference values from mpmath at 30 digits (defining integrals).
Q_AT_1 = 0.158655253931457051414767454368
K1_AT_1 = 0.601907230197234574737540001536
E1_AT_1 = 0.21938393439552027367716377546


def _grid(lo, hi, n=60):
    return np.geomspace(lo, hi, n)


def _oracle_q(x):
    # shifted to t = x + s so the breakpoints follow the 1/x decay width
    w = 1 / max(abs(x), 1)
    tail = mp.quad(lambda s: mp.exp(-x * s - s * s / 2), [0, w, 10 * w, 40 * w, mp.inf])
    return float(mp.exp(-mp.mpf(x) ** 2 / 2) * tail / mp.sqrt(2 * mp.pi))


def _oracle_k(order, x):
    upper = float(mp.acosh(1 + mp.mpf(200) / x))
    f = lambda t: mp.exp(-x * mp.cosh(t)) * mp.cosh(order * t)
    return float(mp.quad(f, np.linspace(0, upper, 6).tolist()))


def _oracle_e1(x):
    return float(mp.quad(lambda t: mp.exp(-t) / t, [x, x + 1, x + 10, mp.inf]))


def test_q_examples():
    assert q_function(0.0) == 0.5
    assert q_function(40.0) < 1e-300
    assert q_function(1.0) == pytest.approx(Q_AT_1, rel=1e-14)


def test_q_vs_oracle():
    for x in _grid(1e-3, 30.0):
        assert q_function(x) == pytest.approx(_oracle_q(x), rel=1e-10)


@given(st.floats(min_value=-30, max_value=30, allow_nan=False))
def test_q_symmetry(x):
    assert abs(q_function(x) + q_function(-x) - 1.0) <= 1e-14


@given(st.floats(min_value=-37, max_value=60, allow_nan=False))
def test_q_scaled_matches_product(x):
    direct = float(mp.exp(mp.mpf(x) ** 2 / 2) * mp.erfc(mp.mpf(x) / mp.sqrt(2)) / 2)
    assert q_scaled(x) == pytest.approx(direct, rel=1e-12)


def test_q_is_probability_and_decreasing():
    xs = np.linspace(-8, 8, 401)
    vals = np.array([q_function(x) for x in xs])
    assert np.all((vals >= 0) & (vals <= 1))
    assert np.all(np.diff(vals) < 0)


def test_bessel_examples():
    x = 0.7
    assert bessel_k(2, x) == pytest.approx(bessel_k(0, x) + 2 / x * bessel_k(1, x), rel=1e-14)
    assert bessel_k(1, 1.0) == pytest.approx(K1_AT_1, rel=1e-14)
    assert abs(1e-6 * bessel_k(1, 1e-6) - 1.0) < 1e-6


@pytest.mark.parametrize("order", [0, 1, 2])
def test_bessel_vs_oracle(order):
    for x in _grid(1e-3, 50.0):
        assert bessel_k(order, x) == pytest.approx(_oracle_k(order, x), rel=1e-10)


def test_bessel_recurrence():
    for x in _grid(1e-3, 50.0, 200):
        k0, k1, k2 = (bessel_k(n, x) for n in (0, 1, 2))
        assert abs(k2 - k0 - 2 / x * k1) <= 1e-12 * k2


@pytest.mark.parametrize("seam", [specfun.BESSEL_SERIES_MAX, specfun.BESSEL_ASYMPTOTIC_MIN])
@pytest.mark.parametrize("order", [0, 1])
def test_bessel_regimes_agree_at_seams(seam, order):
    series_like = {
        specfun.BESSEL_SERIES_MAX: lambda x: specfun._k01_series(x)[order],
        specfun.BESSEL_ASYMPTOTIC_MIN: lambda x: specfun._k_asymptotic(order, x),
    }[seam]
    assert series_like(seam) == pytest.approx(specfun._k_trapezoid(order, seam), rel=1e-11)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_bessel_strictly_decreasing(order):
    vals = np.array([bessel_k(order, x) for x in _grid(1e-3, 50.0, 300)])
    assert np.all(vals > 0)
    assert np.all(np.diff(vals) < 0)


def test_bessel_domain():
    with pytest.raises(ValueError):
        bessel_k(0, 0.0)
    with pytest.raises(ValueError):
        bessel_k(1, -2.0)
    with pytest.raises(ValueError):
        bessel_k(3, 1.0)


def test_bessel_underflow_flushes_to_zero():
    assert bessel_k(1, 800.0) == 0.0
    assert not math.isnan(bessel_k(2, 1e4))


def test_gamma_examples():
    assert upper_incomplete_gamma(2, 1.3) == pytest.approx((1 + 1.3) * math.exp(-1.3), rel=1e-15)
    assert upper_incomplete_gamma(0, 1.0) == pytest.approx(E1_AT_1, rel=1e-14)
    tail = upper_incomplete_gamma(0, 50.0)
    assert 0 < tail < math.exp(-50) / 50 * 1.1


def test_gamma0_vs_oracle():
    for x in _grid(1e-3, 50.0):
        assert exp1(x) == pytest.approx(_oracle_e1(x), rel=1e-10)


def test_gamma_decreasing_and_domain():
    for s in (0, 2):
        vals = np.array([upper_incomplete_gamma(s, x) for x in _grid(1e-3, 50.0, 200)])
        assert np.all(vals > 0) and np.all(np.diff(vals) < 0)
    with pytest.raises(ValueError):
        upper_incomplete_gamma(0, 0.0)
    with pytest.raises(ValueError):
        upper_incomplete_gamma(1, 1.0)
