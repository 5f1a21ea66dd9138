"""Conventional power-splitting (PS) SWIPT receiver used as a reference.

A fraction ``rho`` of the received power goes to the decoder, which sees a
flat Rayleigh channel with Gaussian input and one AWGN source of variance
``sigma2``; the rest feeds the same piecewise-linear harvester. The baseline
transmits at constant power ``E`` unless another input distribution is asked
for.
"""

from dataclasses import dataclass

import numpy as np

from . import streams
from .energy import EhEstimate, harvest_array
from .rates import ErgodicEstimate

__all__ = ["PsConfig", "ps_rate", "ps_energy", "DEFAULT_RHO"]

DEFAULT_RHO = 0.5


@dataclass(frozen=True)
class PsConfig:
    rho: float = DEFAULT_RHO
    mean_power: float = 1.0
    sigma2: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho!r}")
        if not self.mean_power >= 0.0:
            raise ValueError(f"mean_power must be >= 0, got {self.mean_power!r}")
        if not self.sigma2 > 0.0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2!r}")


def ps_rate(cfg, trials, seed, threads=1, fading_scale=1.0):
    """Ergodic decoder rate ``E_h[log2(1 + rho h E / sigma2)]`` in bits."""
    snr = cfg.rho * cfg.mean_power / cfg.sigma2

    def trial(rng, count):
        h = fading_scale * rng.standard_exponential(count)
        return np.log2(1.0 + snr * h)

    s = streams.summarize(streams.per_trial(trial, trials, seed, threads))
    return ErgodicEstimate(s.mean, s.std_error, s.trials)


def ps_energy(cfg, eh, trials, seed, input_dist="constant", threads=1, fading_scale=1.0):
    """Average harvested power from the ``1 - rho`` branch (mW)."""
    if input_dist not in ("constant", "exponential", "uniform"):
        raise ValueError(f"unknown input distribution {input_dist!r}")
    split = 1.0 - cfg.rho
    mean = cfg.mean_power

    def trial(rng, count):
        h = fading_scale * rng.standard_exponential(count)
        if input_dist == "constant":
            s = np.full(count, mean)
        elif input_dist == "exponential":
            s = mean * rng.standard_exponential(count)
        else:
            s = 2.0 * mean * rng.random(count)
        return harvest_array(split * h * s, eh)

    s = streams.summarize(streams.per_trial(trial, trials, seed, threads))
    return EhEstimate(s.mean, "monte_carlo", 3.0 * s.std_error)
