"""Channel-inversion achievable rates of the temperature channel.

Inverting ``A`` at the receiver leaves ``N`` parallel scalar intensity
channels whose noise is amplified by the row norms ``||b_i||^2`` of
``B = A^{-1}``. With mean power ``E`` per slot the per-channel-use rates are

    exponential input:  sum_i 1/(2N) log2(1 + e E^2 / (2 pi sigma^2 ||b_i||^2))
    uniform input:      sum_i 1/(2N) log2(1 + 2 E^2 / (pi e sigma^2 ||b_i||^2))
"""

import math
from dataclasses import dataclass

import numpy as np

from . import streams
from .channel import SingularChannelError

__all__ = [
    "RateConfig",
    "ErgodicEstimate",
    "SNR_COEFFICIENT",
    "rate_ci_generic",
    "rate_ci_explicit",
    "ergodic_rate",
    "snr_db",
]

SNR_COEFFICIENT = {
    "exponential": math.e / (2.0 * math.pi),
    "uniform": 2.0 / (math.pi * math.e),
}


@dataclass(frozen=True)
class RateConfig:
    mean_power: float
    sigma2: float = 1.0
    n: int = 4

    def __post_init__(self):
        if not self.mean_power >= 0.0:
            raise ValueError(f"mean_power must be >= 0, got {self.mean_power!r}")
        if not self.sigma2 > 0.0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2!r}")
        if int(self.n) < 1:
            raise ValueError(f"n must be >= 1, got {self.n!r}")


@dataclass(frozen=True)
class ErgodicEstimate:
    mean: float
    std_error: float
    trials: int


def snr_db(mean_power, sigma2):
    """Axis label used by sweeps: ``10 log10(E / sigma^2)``."""
    if mean_power <= 0:
        return -math.inf
    return 10.0 * math.log10(mean_power / sigma2)


def _coefficient(dist):
    try:
        return SNR_COEFFICIENT[dist]
    except KeyError:
        raise ValueError(f"unknown input distribution {dist!r}") from None


def rate_ci_generic(dist, ch, cfg):
    """Rate in bits per channel use from the row norms of ``A^{-1}``."""
    coef = _coefficient(dist)
    b_norm = np.einsum("ij,ij->i", ch.matrix_b, ch.matrix_b)
    snr = coef * cfg.mean_power**2 / (cfg.sigma2 * b_norm)
    return float(np.sum(np.log2(1.0 + snr)) / (2 * ch.n))


def _explicit_rows(dist, params, gains, mean_power, sigma2):
    # gains: (..., N); returns per-row rates
    coef = _coefficient(dist)
    gains = np.asarray(gains, dtype=float)
    n = gains.shape[-1]
    gain_sq = (params.alpha * gains * mean_power) ** 2 / sigma2
    divisor = np.full(n, params.memory_factor)
    divisor[0] = 1.0
    terms = np.log2(1.0 + coef * gain_sq / divisor)
    return terms.sum(axis=-1) / (2 * n)


def rate_ci_explicit(dist, params, real, cfg):
    """Same rate written directly in ``alpha``, ``beta`` and the gains."""
    if np.any(real.gains <= 0) or params.alpha <= 0:
        raise SingularChannelError("channel inversion needs alpha > 0 and all gains > 0")
    return float(_explicit_rows(dist, params, real.gains, cfg.mean_power, cfg.sigma2))


def ergodic_rate(dist, params, cfg, trials, seed, threads=1, fading_scale=1.0):
    """Monte Carlo average of the channel-inversion rate over Rayleigh fading."""
    _coefficient(dist)
    n = int(cfg.n)

    def trial(rng, count):
        gains = fading_scale * rng.standard_exponential((count, n))
        return _explicit_rows(dist, params, gains, cfg.mean_power, cfg.sigma2)

    s = streams.summarize(streams.per_trial(trial, trials, seed, threads))
    return ErgodicEstimate(s.mean, s.std_error, s.trials)

