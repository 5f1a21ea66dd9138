"""Thermal dynamics and the virtual MIMO temperature channel.

Over ``N`` consecutive slots the receiver temperature obeys

    T_{i+1} = T_i + alpha * h_i * S_i - beta * (T_i - T_e),   T_1 = T_e,

so the stacked rise ``(T_2 .. T_{N+1}) - T_e`` is ``A @ S`` with ``A`` lower
triangular, ``A[i, j] = alpha * (1 - beta)**(i - j) * h_j``. Its inverse is
lower bidiagonal, which gives closed forms for the row norms of ``A^{-1}``
and for the diagonal of ``(A^T A)^{-1}``.

Units: powers in mW, temperatures in K, one slot per channel use.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ThermalParams",
    "ChannelRealization",
    "TemperatureChannel",
    "TemperatureTrace",
    "SingularChannelError",
    "DEFAULT_THERMAL",
    "build_channel",
    "s_diagonal",
    "log_det_ratio",
    "simulate_trace",
    "sample_rayleigh_gains",
    "sample_input_power",
    "INPUT_DISTRIBUTIONS",
]

INPUT_DISTRIBUTIONS = ("exponential", "uniform")


class SingularChannelError(ValueError):
    """A zero fading gain (or zero alpha) makes ``A`` singular."""


@dataclass(frozen=True)
class ThermalParams:
    alpha: float = 0.1
    beta: float = 1.0 - math.exp(-0.3)
    t_env: float = 300.0
    sigma2: float = 1.0

    def __post_init__(self):
        if not self.alpha >= 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha!r}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta!r}")
        if not self.t_env > 0.0:
            raise ValueError(f"t_env must be > 0, got {self.t_env!r}")
        if not self.sigma2 > 0.0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2!r}")

    @property
    def memory_factor(self):
        """``1 + (beta - 1)**2``, the norm inflation of rows 2..N of ``A^{-1}``."""
        return 1.0 + (self.beta - 1.0) ** 2


DEFAULT_THERMAL = ThermalParams()


@dataclass(frozen=True)
class ChannelRealization:
    gains: np.ndarray

    def __post_init__(self):
        gains = np.asarray(self.gains, dtype=float).reshape(-1)
        if gains.size < 1:
            raise ValueError("a channel realization needs at least one gain")
        if np.any(gains < 0) or not np.all(np.isfinite(gains)):
            raise ValueError("fading power gains must be finite and non-negative")
        object.__setattr__(self, "gains", gains)

    @property
    def n(self):
        return self.gains.size


@dataclass(frozen=True)
class TemperatureChannel:
    matrix_a: np.ndarray
    matrix_b: np.ndarray
    row_norm_sq: np.ndarray
    n: int
    params: ThermalParams = field(repr=False, default=DEFAULT_THERMAL)
    gains: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class TemperatureTrace:
    temps: np.ndarray
    powers: np.ndarray

    def __post_init__(self):
        if self.temps.shape != (self.powers.size + 1,):
            raise ValueError("a trace holds N received powers and N + 1 temperatures")


def _check_gains(params, real):
    if real.n == 0:
        raise ValueError("empty channel realization")
    if params.alpha <= 0.0:
        raise SingularChannelError("alpha = 0 gives a singular temperature channel")
    if np.any(real.gains <= 0.0):
        bad = np.flatnonzero(real.gains <= 0.0).tolist()
        raise SingularChannelError(f"zero fading gain at slot(s) {bad}")


def row_norm_sq_closed(params, gains):
    """Squared row norms of ``A^{-1}``; broadcasts over leading axes of ``gains``."""
    gains = np.asarray(gains, dtype=float)
    base = 1.0 / (params.alpha * gains) ** 2
    out = base * params.memory_factor
    out[..., 0] = base[..., 0]
    return out


def build_channel(params, real):
    """Construct ``A``, its bidiagonal inverse ``B`` and the row norms of ``B``.

    Raises
    ------
    SingularChannelError
        If any gain is zero or ``alpha`` is zero.
    """
    _check_gains(params, real)
    h = real.gains
    n = h.size
    idx = np.arange(n)
    lag = idx[:, None] - idx[None, :]
    decay = np.where(lag >= 0, (1.0 - params.beta) ** np.maximum(lag, 0), 0.0)
    a = params.alpha * decay * h[None, :]

    inv_diag = 1.0 / (params.alpha * h)
    b = np.diag(inv_diag)
    if n > 1:
        b[idx[1:], idx[:-1]] = (params.beta - 1.0) * inv_diag[1:]
    return TemperatureChannel(
        matrix_a=a,
        matrix_b=b,
        row_norm_sq=row_norm_sq_closed(params, h),
        n=n,
        params=params,
        gains=h,
    )


def s_diagonal(ch):
    """Diagonal of ``S = (A^T A)^{-1}``, read off ``B`` as ``diag(B B^T)``."""
    b = ch.matrix_b
    return np.einsum("ij,ij->i", b, b)


def log_det_ratio(ch, method="closed"):
    """``0.5 * log2(prod(diag S) / det S)`` in bits.

    ``method="closed"`` uses the reduction to ``(N-1)/2 * log2(1 + (beta-1)^2)``;
    ``method="dense"`` works from ``diag S`` and ``log|det A|``.
    """
    if method == "closed":
        return 0.5 * (ch.n - 1) * math.log2(ch.params.memory_factor)
    if method == "dense":
        sign, logdet_a = np.linalg.slogdet(ch.matrix_a)
        if sign == 0:
            raise SingularChannelError("A is singular")
        # det S = det(A)^-2
        log_prod = float(np.sum(np.log(s_diagonal(ch))))
        return 0.5 * (log_prod + 2.0 * logdet_a) / math.log(2.0)
    raise ValueError(f"unknown method {method!r}")


def simulate_trace(params, real, powers, noise=None):
    """Run the slot recursion and return the observed temperatures.

    Noise is measurement noise on each observed temperature (one sample per
    slot output); it does not feed back into the thermal state.
    """
    s = np.asarray(powers, dtype=float).reshape(-1)
    h = real.gains
    if s.size != h.size:
        raise ValueError(f"got {s.size} input powers for {h.size} channel uses")
    if np.any(s < 0):
        raise ValueError("transmit powers must be non-negative")
    if noise is None:
        w = np.zeros(h.size)
    else:
        w = np.asarray(noise, dtype=float).reshape(-1)
        if w.size != h.size:
            raise ValueError(f"got {w.size} noise samples for {h.size} channel uses")

    received = h * s
    state = np.empty(h.size + 1)
    state[0] = params.t_env
    for i in range(h.size):
        state[i + 1] = (
            state[i] + params.alpha * received[i] - params.beta * (state[i] - params.t_env)
        )
    temps = state.copy()
    temps[1:] += w
    return TemperatureTrace(temps=temps, powers=received)


def sample_rayleigh_gains(n, stream, scale=1.0):
    """Draw ``n`` i.i.d. Rayleigh power gains ``h = |g|^2`` with mean ``scale``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return ChannelRealization(scale * stream.standard_exponential(int(n)))


def sample_input_power(dist, mean, stream, size=None):
    """Draw transmit powers with mean ``mean`` (mW).

    ``"exponential"`` has mean ``mean``; ``"uniform"`` is uniform on
    ``[0, 2 * mean]``.
    """
    if mean < 0:
        raise ValueError(f"mean power must be >= 0, got {mean!r}")
    if dist == "exponential":
        u = stream.standard_exponential(size)
    elif dist == "uniform":
        u = 2.0 * stream.random(size)
    else:
        raise ValueError(f"unknown input distribution {dist!r}")
    return mean * u
