"""Average harvested energy under a piecewise-linear harvester.

The received power is ``P = h S`` with ``h`` unit-mean exponential (Rayleigh
power gain) and ``S`` the transmit power, exponential with mean ``E`` or
uniform on ``[0, 2E]``. Its densities are

    exponential:  f(x) = (2/E) K0(2 sqrt(x/E))
    uniform:      f(x) = E1(x / 2E) / (2E)

Average harvested power is computed three ways: closed form, adaptive
quadrature of the density (the reference), and Monte Carlo.

Two closed forms are kept per input distribution. ``"reduced"`` is the
antiderivative-based expression that agrees with quadrature. ``"unreduced"``
is the longer form with the saturation terms left uncollected; it carries an
extra ``sqrt(P_sat) (P_sat - 1) K1`` term (exponential) and ``Gamma(0, .)``
in place of ``Gamma(2, .)`` in its last term (uniform), so it does not match
quadrature and is kept only to measure that deviation.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import streams
from .channel import INPUT_DISTRIBUTIONS
from .quadrature import integrate
from .specfun import bessel_k, exp1, upper_incomplete_gamma

__all__ = [
    "EhParams",
    "EhEstimate",
    "DEFAULT_EH",
    "harvest",
    "harvest_array",
    "received_power_pdf",
    "received_power_ccdf",
    "average_harvested_closed",
    "average_harvested_quadrature",
    "average_harvested_mc",
    "METHODS",
]

METHODS = ("closed_form", "quadrature", "monte_carlo")


@dataclass(frozen=True)
class EhParams:
    eta: float = 0.86
    p_th: float = 0.5
    p_sat: float = 1.5

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")
        if not 0.0 <= self.p_th < self.p_sat:
            raise ValueError(
                f"need 0 <= p_th < p_sat, got p_th={self.p_th!r}, p_sat={self.p_sat!r}"
            )

    @property
    def ceiling(self):
        return self.eta * self.p_sat


DEFAULT_EH = EhParams()


@dataclass(frozen=True)
class EhEstimate:
    value: float
    method: str
    abs_error: float = 0.0


def harvest(p, eh):
    """Harvested power (mW) for received power ``p`` (mW)."""
    if p < 0:
        raise ValueError(f"received power must be >= 0, got {p!r}")
    if p <= eh.p_th:
        return 0.0
    if p <= eh.p_sat:
        return eh.eta * p
    return eh.eta * eh.p_sat


def harvest_array(p, eh):
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("received power must be >= 0")
    out = np.where(p > eh.p_sat, eh.p_sat, p)
    return eh.eta * np.where(p > eh.p_th, out, 0.0)


def _check_dist(dist):
    if dist not in INPUT_DISTRIBUTIONS:
        raise ValueError(f"unknown input distribution {dist!r}")


def _pdf_integral(dist, mean, x):
    # Density as the mixture over the transmit power, by quadrature.
    if dist == "exponential":
        def g(s):
            return math.exp(-s / mean - x / s) / (s * mean)
        return integrate(g, 0.0, math.inf, rel_tol=1e-12).value

    def g(s):
        return math.exp(-x / s) / (2.0 * mean * s)
    return integrate(g, 0.0, 2.0 * mean, rel_tol=1e-12).value


def received_power_pdf(dist, mean, x, method="special"):
    """Density of ``P = h S`` at ``x > 0``.

    ``method="special"`` uses the Bessel / exponential-integral identities;
    ``method="integral"`` integrates over the transmit power directly.
    """
    _check_dist(dist)
    if not mean > 0:
        raise ValueError(f"mean power must be > 0, got {mean!r}")
    if not x > 0:
        raise ValueError(f"density is evaluated for x > 0 only, got {x!r}")
    if method == "integral":
        return _pdf_integral(dist, mean, x)
    if method != "special":
        raise ValueError(f"unknown method {method!r}")
    if dist == "exponential":
        return 2.0 / mean * bessel_k(0, 2.0 * math.sqrt(x / mean))
    return exp1(x / (2.0 * mean)) / (2.0 * mean)


def received_power_ccdf(dist, mean, x):
    """``P[h S > x]`` in closed form."""
    _check_dist(dist)
    if x <= 0:
        return 1.0
    if dist == "exponential":
        z = 2.0 * math.sqrt(x / mean)
        return z * bessel_k(1, z)
    t = x / (2.0 * mean)
    return math.exp(-t) - t * exp1(t)


def _closed_exponential(mean, eh, form):
    sq = math.sqrt(mean)
    z_th = 2.0 * math.sqrt(eh.p_th / mean)
    z_sat = 2.0 * math.sqrt(eh.p_sat / mean)
    k2_sat = bessel_k(2, z_sat)
    if eh.p_th > 0:
        th_terms = eh.p_th**1.5 * bessel_k(1, z_th) + sq * eh.p_th * bessel_k(2, z_th)
    else:
        # limits as p_th -> 0: p^1.5 K1 -> 0, p K2(2 sqrt(p/E)) -> E/2
        th_terms = sq * 0.5 * mean
    bracket = th_terms - sq * eh.p_sat * k2_sat
    if form == "unreduced":
        bracket -= math.sqrt(eh.p_sat) * (eh.p_sat - 1.0) * bessel_k(1, z_sat)
    return 2.0 * eh.eta / sq * bracket


def _closed_uniform(mean, eh, form):
    t_sat = eh.p_sat / (2.0 * mean)
    g0_sat = upper_incomplete_gamma(0, t_sat)
    g2_sat = upper_incomplete_gamma(2, t_sat)
    if eh.p_th > 0:
        t_th = eh.p_th / (2.0 * mean)
        th_e1 = eh.p_th**2 * upper_incomplete_gamma(0, t_th)
        last = (
            upper_incomplete_gamma(0, t_th)
            if form == "unreduced"
            else upper_incomplete_gamma(2, t_th)
        )
    else:
        if form == "unreduced":
            raise ValueError("the unreduced uniform form diverges for p_th = 0")
        th_e1 = 0.0
        last = 1.0  # Gamma(2, 0)
    bracket = th_e1 + eh.p_sat**2 * g0_sat + 4.0 * mean**2 * (g2_sat - last)
    return eh.eta * eh.p_sat * math.exp(-t_sat) - eh.eta / (4.0 * mean) * bracket


def average_harvested_closed(dist, mean, eh, form="reduced"):
    """Closed-form average harvested power (mW).

    Parameters
    ----------
    dist : {"exponential", "uniform"}
    mean : float
        Mean transmit power ``E`` in mW, positive.
    eh : EhParams
    form : {"reduced", "unreduced"}
        ``"reduced"`` is the quadrature-validated expression.
    """
    _check_dist(dist)
    if not mean > 0:
        raise ValueError(f"mean power must be > 0, got {mean!r}")
    if form not in ("reduced", "unreduced"):
        raise ValueError(f"unknown form {form!r}")
    if dist == "exponential":
        value = _closed_exponential(mean, eh, form)
    else:
        value = _closed_uniform(mean, eh, form)
    if form == "reduced":
        # cancellation can leave a few ulps outside [0, eta P_sat]
        value = min(max(value, 0.0), eh.ceiling)
    return EhEstimate(value, "closed_form", 0.0)


def average_harvested_quadrature(dist, mean, eh, rel_tol=1e-11):
    """Average harvested power by integrating the received-power density."""
    _check_dist(dist)
    if not mean > 0:
        raise ValueError(f"mean power must be > 0, got {mean!r}")
    if eh.eta == 0.0:
        return EhEstimate(0.0, "quadrature", 0.0)

    def pdf(x):
        return received_power_pdf(dist, mean, x)

    linear = integrate(lambda x: x * pdf(x), eh.p_th, eh.p_sat, rel_tol=rel_tol)
    tail = integrate(pdf, eh.p_sat, math.inf, rel_tol=rel_tol)
    value = eh.eta * (linear.value + eh.p_sat * tail.value)
    err = eh.eta * (linear.abs_error_estimate + eh.p_sat * tail.abs_error_estimate)
    return EhEstimate(value, "quadrature", err)


def average_harvested_mc(dist, mean, eh, trials, seed, threads=1, fading_scale=1.0):
    """Monte Carlo estimate; ``abs_error`` is three standard errors."""
    _check_dist(dist)
    if mean < 0:
        raise ValueError(f"mean power must be >= 0, got {mean!r}")

    def trial(rng, count):
        h = fading_scale * rng.standard_exponential(count)
        if dist == "exponential":
            s = mean * rng.standard_exponential(count)
        else:
            s = 2.0 * mean * rng.random(count)
        return harvest_array(h * s, eh)

    s = streams.summarize(streams.per_trial(trial, trials, seed, threads))
    return EhEstimate(s.mean, "monte_carlo", 3.0 * s.std_error)
