"""Upper bound on the ergodic capacity of the temperature channel.

Per fading realization the bound is

    0.5 * log2(prod(diag S) / det S) + (1/N) * sum_i rbar(s_ii^{-1/2} E, sigma)

with ``S = (A^T A)^{-1}`` and ``rbar`` the scalar intensity-channel bound with
free parameters ``gamma > 0`` and ``delta >= 0``. ``rbar`` is evaluated with
natural logarithms and converted to bits; ``log_base="mixed"`` keeps the
base-2 logarithms on the first and last terms (and in the suboptimal delta)
for comparison only.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import streams
from .channel import row_norm_sq_closed
from .quadrature import minimize_2d
from .rates import ErgodicEstimate
from .specfun import q_function, q_scaled

__all__ = [
    "BoundParams",
    "BoundBreakdown",
    "r_bar",
    "suboptimal_params",
    "minimized_params",
    "bound_for_realization",
    "ergodic_capacity_bound",
    "LOG_BASES",
    "TUNINGS",
]

LOG_BASES = ("nat", "mixed")
TUNINGS = ("suboptimal", "minimized")

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LN2 = math.log(2.0)
_q = np.frompyfunc(q_function, 1, 1)
_q_scaled = np.frompyfunc(q_scaled, 1, 1)


def _qv(x):
    return np.asarray(_q(x), dtype=float)


def _qsv(x):
    return np.asarray(_q_scaled(x), dtype=float)


@dataclass(frozen=True)
class BoundParams:
    gamma: float
    delta: float

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma!r}")
        if not self.delta >= 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta!r}")


def _check_base(log_base):
    if log_base not in LOG_BASES:
        raise ValueError(f"log_base must be one of {LOG_BASES}, got {log_base!r}")


def _r_bar(amp, sigma, gamma, delta, log_base="nat"):
    # Broadcasting core of r_bar; Q terms are evaluated only on the distinct
    # delta (and delta + amp) values, which keeps grid searches cheap.
    amp = np.asarray(amp, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    delta = np.asarray(delta, dtype=float)
    z = delta / sigma
    half_z2 = 0.5 * z * z
    u = np.exp(-half_z2)
    q = _qv(z)
    # log(gamma * u + sqrt(2 pi) sigma Q(z)) without underflow
    log_first = -half_z2 + np.log(gamma + _SQRT_2PI * sigma * _qsv(z))
    log_last = 0.5 * math.log(2.0 * math.pi * math.e * sigma * sigma)
    if log_base == "mixed":
        log_first = log_first / _LN2
        log_last = log_last / _LN2
    return (
        log_first
        + 0.5 * q
        + delta * u / (2.0 * _SQRT_2PI * sigma)
        + half_z2 * (1.0 - _qv((delta + amp) / sigma))
        + (delta + amp + sigma * u / _SQRT_2PI) / gamma
        - log_last
    )


def r_bar(effective_amp, sigma, p, log_base="nat"):
    """Scalar intensity-channel capacity bound for amplitude ``s^{-1/2} E``.

    Parameters
    ----------
    effective_amp : float
        ``s_ii^{-1/2} * E``, non-negative.
    sigma : float
        Noise standard deviation.
    p : BoundParams
    log_base : {"nat", "mixed"}

    Returns
    -------
    float
        Nats for ``log_base="nat"``; the literal mixed-base value otherwise.
    """
    _check_base(log_base)
    if effective_amp < 0:
        raise ValueError("effective_amp must be >= 0")
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    return float(_r_bar(effective_amp, sigma, p.gamma, p.delta, log_base))


def _suboptimal(amp, sigma, log_base="nat"):
    amp = np.asarray(amp, dtype=float)
    if log_base == "nat":
        delta = sigma * np.log1p(amp / sigma)
    else:
        delta = sigma * np.log2(1.0 + amp / sigma)
    z = delta / sigma
    c = delta + amp + sigma * np.exp(-0.5 * z * z) / _SQRT_2PI
    gamma = 0.5 * c + 0.5 * np.sqrt(c * c + 4.0 * c * _SQRT_2PI * sigma * _qsv(z))
    return gamma, delta


def suboptimal_params(effective_amp, sigma, log_base="nat"):
    """Closed-form (gamma, delta) choice.

    ``gamma`` is the exact minimizer of the nat-based bound for the given
    ``delta``; ``delta = sigma * ln(1 + amp / sigma)``.
    """
    _check_base(log_base)
    gamma, delta = _suboptimal(effective_amp, sigma, log_base)
    return BoundParams(float(gamma), float(delta))


def minimized_params(effective_amp, sigma, log_base="nat", grid=64):
    """Numerically minimize ``r_bar`` over a box around the suboptimal point.

    Returns ``(BoundParams, value)``. The box is
    ``gamma in [1e-3 g, 10 g]``, ``delta in [0, 10 d + 1]`` with ``(g, d)``
    the suboptimal choice; the suboptimal point itself is always a
    candidate, so the result never exceeds it.
    """
    _check_base(log_base)
    sub = suboptimal_params(effective_amp, sigma, log_base)
    box = ((1e-3 * sub.gamma, 10.0 * sub.gamma), (0.0, 10.0 * sub.delta + 1.0))

    def f(gamma, delta):
        return _r_bar(effective_amp, sigma, gamma, delta, log_base)

    (gamma, delta), value = minimize_2d(
        f, box, grid=grid, candidates=[(sub.gamma, sub.delta)], vectorized=True
    )
    return BoundParams(gamma, max(delta, 0.0)), value


@dataclass(frozen=True)
class BoundBreakdown:
    """Bits per channel use, split into the two summands of the bound."""

    log_det_term: float
    rbar_term: float

    @property
    def total(self):
        return self.log_det_term + self.rbar_term

    @property
    def total_per_use(self):
        # alternative reading with the log-det term also divided by N
        return self.log_det_term / self.n + self.rbar_term

    n: int = 1


def _rbar_bits(r, log_base):
    return r / _LN2 if log_base == "nat" else r


def _realization_rbar(amps, sigma, tune, log_base):
    if tune == "suboptimal":
        gamma, delta = _suboptimal(amps, sigma, log_base)
        return _r_bar(amps, sigma, gamma, delta, log_base)
    if tune == "minimized":
        flat = np.asarray(amps, dtype=float).reshape(-1)
        out = np.array([minimized_params(a, sigma, log_base)[1] for a in flat])
        return out.reshape(np.shape(amps))
    raise ValueError(f"tune must be one of {TUNINGS}, got {tune!r}")


def bound_for_realization(params, real, cfg, tune="suboptimal", log_base="nat"):
    """Bound for one fading realization, as a :class:`BoundBreakdown`."""
    _check_base(log_base)
    gains = real.gains
    n = gains.size
    sigma = math.sqrt(cfg.sigma2)
    s_diag = row_norm_sq_closed(params, gains)
    amps = cfg.mean_power / np.sqrt(s_diag)
    r = _realization_rbar(amps, sigma, tune, log_base)
    log_det = 0.5 * (n - 1) * math.log2(params.memory_factor)
    return BoundBreakdown(log_det, float(np.sum(_rbar_bits(r, log_base)) / n), n)


def ergodic_capacity_bound(
    params,
    cfg,
    trials,
    seed,
    tune="suboptimal",
    threads=1,
    log_base="nat",
    first_term="total",
    fading_scale=1.0,
):
    """Monte Carlo average of the bound over Rayleigh fading, in bits.

    ``first_term="per-use"`` divides the log-det summand by ``N`` as well.
    """
    _check_base(log_base)
    if tune not in TUNINGS:
        raise ValueError(f"tune must be one of {TUNINGS}, got {tune!r}")
    if first_term not in ("total", "per-use"):
        raise ValueError(f"unknown first_term {first_term!r}")
    n = int(cfg.n)
    sigma = math.sqrt(cfg.sigma2)
    log_det = 0.5 * (n - 1) * math.log2(params.memory_factor)
    if first_term == "per-use":
        log_det /= n

    def trial(rng, count):
        gains = fading_scale * rng.standard_exponential((count, n))
        amps = cfg.mean_power / np.sqrt(row_norm_sq_closed(params, gains))
        r = _rbar_bits(_realization_rbar(amps, sigma, tune, log_base), log_base)
        return log_det + r.sum(axis=1) / n

    s = streams.summarize(streams.per_trial(trial, trials, seed, threads))
    return ErgodicEstimate(s.mean, s.std_error, s.trials)
