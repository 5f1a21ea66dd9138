r"""Scalar special functions used by the bound and energy closed forms.

Provides the Gaussian tail :math:`Q(x)`, the modified Bessel functions of the
second kind :math:`K_0, K_1, K_2` and the upper incomplete gamma function
:math:`\Gamma(s, x)` for :math:`s \in \{0, 2\}`.

Every function is pure Python on top of :mod:`math`. Results smaller than the
smallest positive normal double are flushed to exactly ``0.0``; no in-domain
input produces NaN.
"""

import math

import numpy as np

__all__ = [
    "q_function",
    "q_scaled",
    "bessel_k",
    "upper_incomplete_gamma",
    "exp1",
]

EULER_GAMMA = 0.57721566490153286061
TINY = np.finfo(np.float64).tiny

# Regime boundaries for K_n: power series below, trapezoidal rule on the
# cosh integral in the middle, Hankel asymptotic series above.
BESSEL_SERIES_MAX = 1.0
BESSEL_ASYMPTOTIC_MIN = 30.0
_TRAPEZOID_STEP = 0.05


def _flush(value):
    return 0.0 if abs(value) < TINY else value


def q_function(x):
    """Gaussian tail probability ``Q(x) = P[Z > x]`` for standard normal Z."""
    x = float(x)
    if math.isnan(x):
        raise ValueError("q_function: x must not be NaN")
    return _flush(0.5 * math.erfc(x / math.sqrt(2.0)))


def q_scaled(x):
    """Return ``exp(x**2 / 2) * Q(x)`` without intermediate under/overflow.

    Finite for ``x >= -37``; below that the true value exceeds the double
    range and ``inf`` is returned.
    """
    x = float(x)
    if x < -37.5:
        return math.inf
    if x < 20.0:
        return 0.5 * math.erfc(x / math.sqrt(2.0)) * math.exp(0.5 * x * x)
    # Asymptotic Mills-ratio series; at x >= 20 the smallest term is far below
    # double precision before the series starts to diverge.
    inv = 1.0 / (x * x)
    term, total, k = 1.0, 1.0, 1
    while True:
        term *= -(2 * k - 1) * inv
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        k += 1
    return total / (x * math.sqrt(2.0 * math.pi))


def _k01_series(x):
    y = 0.25 * x * x
    log_term = math.log(0.5 * x) + EULER_GAMMA

    i0 = 1.0
    i1 = 1.0
    s0 = 0.0
    s1 = 1.0 - 2.0 * EULER_GAMMA  # psi(1) + psi(2)
    t0 = 1.0  # y^k / (k!)^2
    t1 = 1.0  # y^k / (k! (k+1)!)
    harmonic = 0.0
    for k in range(1, 60):
        t0 *= y / (k * k)
        t1 *= y / (k * (k + 1))
        harmonic += 1.0 / k
        i0 += t0
        i1 += t1
        s0 += harmonic * t0
        # psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        s1 += (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * EULER_GAMMA) * t1
        if t0 < 1e-18 * i0:
            break
    i1 *= 0.5 * x
    k0 = -log_term * i0 + s0
    k1 = 1.0 / x + math.log(0.5 * x) * i1 - 0.25 * x * s1
    return k0, k1


def _k_trapezoid(order, x):
    # K_n(x) = exp(-x) * int_0^inf exp(-x (cosh t - 1)) cosh(n t) dt; the
    # integrand is analytic in a strip, so the trapezoidal rule converges
    # geometrically in 1/step.
    t_max = math.acosh(1.0 + 45.0 / x) + 1.0
    t = np.arange(0.0, t_max, _TRAPEZOID_STEP)
    f = np.exp(-x * (np.cosh(t) - 1.0)) * np.cosh(order * t)
    total = _TRAPEZOID_STEP * (f.sum() - 0.5 * f[0])
    return float(total) * math.exp(-x)


def _k_asymptotic(order, x):
    mu = 4.0 * order * order
    term, total, k = 1.0, 1.0, 1
    while k < 200:
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        k += 1
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * total


def _k01(x):
    if x <= BESSEL_SERIES_MAX:
        return _k01_series(x)
    if x < BESSEL_ASYMPTOTIC_MIN:
        return _k_trapezoid(0, x), _k_trapezoid(1, x)
    return _k_asymptotic(0, x), _k_asymptotic(1, x)


def bessel_k(order, x):
    """Modified Bessel function of the second kind ``K_order(x)``.

    Parameters
    ----------
    order : int
        One of 0, 1, 2.
    x : float
        Positive argument.

    Returns
    -------
    float
        ``K_order(x)``; values below the smallest normal double are returned
        as 0.0 (happens for x beyond roughly 700).

    Raises
    ------
    ValueError
        If ``x <= 0`` or ``order`` is not 0, 1 or 2.
    """
    if order not in (0, 1, 2):
        raise ValueError(f"bessel_k: unsupported order {order!r}")
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        if x == math.inf:
            return 0.0
        raise ValueError(f"bessel_k: x must be positive, got {x!r}")
    k0, k1 = _k01(x)
    if order == 0:
        value = k0
    elif order == 1:
        value = k1
    else:
        value = k0 + (2.0 / x) * k1
    return _flush(value)


def exp1(x):
    """Exponential integral ``E1(x) = Gamma(0, x)`` for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"exp1: x must be positive, got {x!r}")
    if x <= 1.0:
        total, term, k = 0.0, 1.0, 1
        while True:
            term *= -x / k
            contrib = term / k
            total += contrib
            if abs(contrib) < 1e-17 * max(abs(total), 1e-300):
                break
            k += 1
        return -EULER_GAMMA - math.log(x) - total
    if x > 745.0:
        return 0.0
    # Continued fraction (modified Lentz).
    b = x + 1.0
    c = 1.0 / 1e-300
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        a = -i * i
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return _flush(h * math.exp(-x))


def upper_incomplete_gamma(s, x):
    """Upper incomplete gamma ``Gamma(s, x)`` for ``s`` in ``{0, 2}``."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"upper_incomplete_gamma: x must be positive, got {x!r}")
    if s == 0:
        return exp1(x)
    if s == 2:
        return _flush((1.0 + x) * math.exp(-x))
    raise ValueError(f"upper_incomplete_gamma: unsupported s={s!r}")
