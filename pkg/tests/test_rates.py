import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermswipt import streams
from thermswipt.channel import ChannelRealization, ThermalParams, build_channel, sample_rayleigh_gains
from thermswipt.rates import RateConfig, ergodic_rate, rate_ci_explicit, rate_ci_generic, snr_db

BETA = 1.0 - math.exp(-0.3)
DEFAULTS = ThermalParams(alpha=0.1, beta=BETA)

# 0.5 * log2(1 + e / (2 pi)), mpmath at 30 digits
SINGLE_SLOT_EXP_RATE = 0.259332016918756426186141386612
# (1/4)[log2(1 + 2/(pi e)) + log2(1 + 2/(pi e (1 + (beta-1)^2)))], mpmath
TWO_SLOT_UNI_RATE = 0.126682322052290581853564124513


@pytest.mark.parametrize("dist", ["exponential", "uniform"])
def test_zero_power(dist):
    ch = build_channel(DEFAULTS, ChannelRealization([0.5, 2.0]))
    assert rate_ci_generic(dist, ch, RateConfig(0.0, 1.0, 2)) == 0.0


def test_single_slot_value():
    ch = build_channel(DEFAULTS, ChannelRealization([1.0]))
    rate = rate_ci_generic("exponential", ch, RateConfig(10.0, 1.0, 1))
    assert rate == pytest.approx(SINGLE_SLOT_EXP_RATE, rel=1e-14)


def test_two_slot_explicit_value():
    real = ChannelRealization([1.0, 1.0])
    assert rate_ci_explicit("uniform", DEFAULTS, real, RateConfig(10.0, 1.0, 2)) == pytest.approx(
        TWO_SLOT_UNI_RATE, rel=1e-14
    )


def test_explicit_equals_generic_on_random_channels():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        params = ThermalParams(alpha=rng.uniform(0.01, 1), beta=rng.uniform(0, 1), sigma2=rng.uniform(0.1, 4))
        real = ChannelRealization(rng.uniform(1e-3, 10, n))
        cfg = RateConfig(rng.uniform(0.1, 1e3), params.sigma2, n)
        ch = build_channel(params, real)
        for dist in ("exponential", "uniform"):
            g = rate_ci_generic(dist, ch, cfg)
            assert rate_ci_explicit(dist, params, real, cfg) == pytest.approx(g, rel=1e-12)


def test_flat_memory_terms_identical():
    params = ThermalParams(alpha=0.1, beta=1.0)
    real = ChannelRealization([1.5, 1.5, 1.5])
    one = rate_ci_explicit("exponential", params, ChannelRealization([1.5]), RateConfig(7.0, 1.0, 1))
    assert rate_ci_explicit("exponential", params, real, RateConfig(7.0, 1.0, 3)) == pytest.approx(one, rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(1e-3, 10.0), min_size=1, max_size=8),
    st.floats(1e-3, 1e4),
    st.floats(0.0, 1.0),
)
def test_exponential_beats_uniform(gains, mean_power, beta):
    params = ThermalParams(alpha=0.1, beta=beta)
    real = ChannelRealization(gains)
    cfg = RateConfig(mean_power, 1.0, len(gains))
    assert rate_ci_explicit("exponential", params, real, cfg) > rate_ci_explicit("uniform", params, real, cfg)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(1e-3, 10.0), min_size=1, max_size=6), st.floats(0.01, 100.0), st.floats(0.1, 10.0))
def test_monotone_and_scale_invariant(gains, mean_power, c):
    real = ChannelRealization(gains)
    n = len(gains)
    for dist in ("exponential", "uniform"):
        base = rate_ci_explicit(dist, DEFAULTS, real, RateConfig(mean_power, 1.0, n))
        more = rate_ci_explicit(dist, DEFAULTS, real, RateConfig(mean_power * 1.5, 1.0, n))
        assert more >= base
        scaled = rate_ci_explicit(dist, DEFAULTS, real, RateConfig(c * mean_power, c * c, n))
        assert scaled == pytest.approx(base, rel=1e-10)


def test_ergodic_single_trial_matches_realization():
    cfg = RateConfig(10.0, 1.0, 4)
    est = ergodic_rate("exponential", DEFAULTS, cfg, trials=1, seed=77)
    real = sample_rayleigh_gains(4, streams.stream(77, 0))
    assert est.mean == pytest.approx(rate_ci_explicit("exponential", DEFAULTS, real, cfg), rel=1e-15)
    assert est.trials == 1 and est.std_error == 0.0


def test_ergodic_zero_power():
    est = ergodic_rate("uniform", DEFAULTS, RateConfig(0.0, 1.0, 4), trials=1000, seed=1)
    assert est.mean == 0.0 and est.std_error == 0.0


def test_ergodic_is_thread_independent():
    cfg = RateConfig(30.0, 1.0, 6)
    trials = 2 * streams.CHUNK_SIZE + 5
    a = ergodic_rate("exponential", DEFAULTS, cfg, trials, seed=3, threads=1)
    b = ergodic_rate("exponential", DEFAULTS, cfg, trials, seed=3, threads=4)
    assert a == b


def test_snr_db_mapping():
    assert snr_db(10.0, 1.0) == pytest.approx(10.0)
    assert snr_db(0.0, 1.0) == -math.inf


def test_rate_config_invariants():
    with pytest.raises(ValueError):
        RateConfig(-1.0)
    with pytest.raises(ValueError):
        RateConfig(1.0, 0.0)
    with pytest.raises(ValueError):
        RateConfig(1.0, 1.0, 0)
