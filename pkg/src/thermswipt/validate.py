"""Self-check suite: matrix identities, oracle equivalences, special functions.

Each check returns a :class:`Check`; :func:`run_validate` runs them all and
never raises on a failed comparison.
"""

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import streams
from .bound import minimized_params, r_bar, suboptimal_params
from .channel import (
    ChannelRealization,
    ThermalParams,
    build_channel,
    log_det_ratio,
    s_diagonal,
    simulate_trace,
)
from .energy import (
    DEFAULT_EH,
    average_harvested_closed,
    average_harvested_mc,
    average_harvested_quadrature,
    received_power_pdf,
)
from .quadrature import integrate
from .rates import RateConfig, rate_ci_explicit, rate_ci_generic
from .specfun import bessel_k, q_function, upper_incomplete_gamma

__all__ = ["Check", "run_validate", "random_channels", "CHECKS"]


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: measured {self.measured:.3e} (tol {self.tolerance:.1e})"
        if self.detail:
            text += f"  {self.detail}"
        return text


def random_channels(count=200, seed=2024, n_max=8, h_max=10.0):
    """Random (params, realization) pairs with N in 1..n_max and beta in [0, 1]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, n_max + 1))
        beta = float(rng.uniform(0.0, 1.0))
        alpha = float(rng.uniform(0.01, 1.0))
        gains = rng.uniform(0.0, h_max, n)
        gains[gains == 0.0] = h_max
        out.append((ThermalParams(alpha=alpha, beta=beta), ChannelRealization(gains)))
    return out


def check_inverse_identity(build=build_channel, channels=None):
    channels = channels or random_channels()
    worst = 0.0
    for params, real in channels:
        ch = build(params, real)
        err = np.max(np.abs(ch.matrix_a @ ch.matrix_b - np.eye(ch.n)))
        worst = max(worst, float(err))
    return Check("A·B = I", worst <= 1e-10, worst, 1e-10)


def _rel(a, b):
    return float(np.max(np.abs(np.asarray(a) / np.asarray(b) - 1.0)))


def check_row_norms(build=build_channel, channels=None):
    channels = channels or random_channels()
    worst = 0.0
    for params, real in channels:
        ch = build(params, real)
        dense = np.linalg.inv(ch.matrix_a)
        worst = max(worst, _rel(ch.row_norm_sq, np.sum(dense**2, axis=1)))
    return Check("row norms closed form vs dense inverse", worst <= 1e-10, worst, 1e-10)


def check_s_diagonal(build=build_channel, channels=None):
    channels = channels or random_channels()
    worst_s = 0.0
    worst_ld = 0.0
    for params, real in channels:
        ch = build(params, real)
        dense = np.diag(np.linalg.inv(ch.matrix_a.T @ ch.matrix_a))
        worst_s = max(worst_s, _rel(s_diagonal(ch), dense), _rel(ch.row_norm_sq, dense))
        worst_ld = max(
            worst_ld,
            abs(log_det_ratio(ch, "dense") - 0.5 * (ch.n - 1) * math.log2(1 + (params.beta - 1) ** 2)),
        )
    return [
        Check("diag((AᵀA)⁻¹) = ‖b_i‖²", worst_s <= 1e-10, worst_s, 1e-10),
        Check("log-det ratio closed vs dense", worst_ld <= 1e-9, worst_ld, 1e-9),
    ]


def check_rate_forms(count=1000, seed=7):
    rng = np.random.default_rng(seed)
    worst = 0.0
    ordered = True
    for params, real in random_channels(count, seed):
        mean_power = float(rng.uniform(0.1, 1000.0))
        cfg = RateConfig(mean_power, float(rng.uniform(0.1, 4.0)), real.n)
        ch = build_channel(params, real)
        exp_rate = None
        for dist in ("exponential", "uniform"):
            g = rate_ci_generic(dist, ch, cfg)
            e = rate_ci_explicit(dist, params, real, cfg)
            worst = max(worst, abs(g - e) / abs(g))
            if dist == "exponential":
                exp_rate = e
            elif not exp_rate > e:
                ordered = False
    return [
        Check("rate explicit vs generic", worst <= 1e-12, worst, 1e-12),
        Check("exponential rate > uniform rate", ordered, 0.0 if ordered else 1.0, 0.0),
    ]


def check_trace(count=50, seed=11):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for params, real in random_channels(count, seed):
        s = rng.uniform(0.0, 10.0, real.n)
        trace = simulate_trace(params, real, s)
        ch = build_channel(params, real)
        worst = max(worst, float(np.max(np.abs(trace.temps[1:] - params.t_env - ch.matrix_a @ s))))
    return Check("trace recursion = A·S + T_e", worst <= 1e-12, worst, 1e-12)


# Oracles integrate exponentially scaled representations so that the
# absolute-error floor of the integrator never dominates.
def _oracle_q(x):
    # Q(x) = phi(x) * int_0^inf exp(-x s - s^2 / 2) ds
    phi = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    body = integrate(lambda s: math.exp(-x * s - 0.5 * s * s), 0.0, math.inf, rel_tol=1e-13)
    return phi * body.value


def _oracle_k(order, x):
    # K_n(x) = exp(-x) * int_0^inf exp(-x (cosh t - 1)) cosh(n t) dt
    t_max = math.acosh(1.0 + 800.0 / x)

    def f(t):
        if t > t_max:
            return 0.0
        return math.exp(-x * (math.cosh(t) - 1.0)) * math.cosh(order * t)

    return math.exp(-x) * integrate(f, 0.0, math.inf, rel_tol=1e-13).value


def _oracle_e1(x):
    # E1(x) = exp(-x) * int_0^inf exp(-s) / (x + s) ds
    return math.exp(-x) * integrate(lambda s: math.exp(-s) / (x + s), 0.0, math.inf, rel_tol=1e-13).value


def check_special_functions(points=50):
    grid = np.geomspace(1e-3, 30.0, points)
    rows = {
        "Q": [abs(q_function(x) / _oracle_q(x) - 1) for x in grid],
        "K1": [abs(bessel_k(1, x) / _oracle_k(1, x) - 1) for x in grid],
        "K2": [abs(bessel_k(2, x) / _oracle_k(2, x) - 1) for x in grid],
        "Gamma(0,.)": [abs(upper_incomplete_gamma(0, x) / _oracle_e1(x) - 1) for x in grid],
    }
    checks = [
        Check(f"{name} vs quadrature oracle ({points} pts)", max(errs) <= 1e-10, max(errs), 1e-10)
        for name, errs in rows.items()
    ]
    rec = max(
        abs(bessel_k(2, x) - bessel_k(0, x) - 2.0 / x * bessel_k(1, x)) / bessel_k(2, x)
        for x in np.geomspace(1e-3, 50.0, points)
    )
    checks.append(Check("Bessel recurrence", rec <= 1e-12, rec, 1e-12))
    sym = max(abs(q_function(x) + q_function(-x) - 1.0) for x in np.linspace(-10, 10, 201))
    checks.append(Check("Q(x) + Q(-x) = 1", sym <= 1e-14, sym, 1e-14))
    return checks


def check_pdf_normalization():
    worst = 0.0
    for dist in ("exponential", "uniform"):
        for mean in (0.3, 1.0, 5.0):
            total = integrate(lambda x: received_power_pdf(dist, mean, x), 0.0, math.inf, rel_tol=1e-11)
            worst = max(worst, abs(total.value - 1.0))
    return Check("received-power pdfs integrate to 1", worst <= 1e-8, worst, 1e-8)


def check_energy_closed_forms(eh=DEFAULT_EH, points=25):
    checks = []
    for dist in ("exponential", "uniform"):
        worst = 0.0
        loose = 0.0
        for mean in np.geomspace(0.1, 10.0, points):
            ref = average_harvested_quadrature(dist, mean, eh).value
            worst = max(worst, abs(average_harvested_closed(dist, mean, eh).value / ref - 1))
            unreduced = average_harvested_closed(dist, mean, eh, form="unreduced").value
            loose = max(loose, abs(unreduced / ref - 1))
        checks.append(Check(f"EH closed form vs quadrature ({dist})", worst <= 1e-6, worst, 1e-6))
        checks.append(Check(
            f"EH unreduced closed form deviation ({dist})", True, loose, math.inf,
            "informational: max relative deviation of the unreduced expression",
        ))
    return checks


def check_energy_mc(eh=DEFAULT_EH, trials=10**6, seed=20240601):
    worst = 0.0
    for dist in ("exponential", "uniform"):
        for mean in (0.5, 1.0, 2.0, 5.0):
            ref = average_harvested_quadrature(dist, mean, eh).value
            mc = average_harvested_mc(dist, mean, eh, trials, seed)
            # abs_error is three standard errors
            worst = max(worst, abs(mc.value - ref) / (mc.abs_error / 3.0))
    return Check("EH Monte Carlo vs quadrature (std errors)", worst <= 3.0, worst, 3.0)


def check_energy_limits(eh=DEFAULT_EH):
    low = max(average_harvested_closed(d, 1e-4, eh).value for d in ("exponential", "uniform"))
    high = max(
        abs(average_harvested_closed(d, 1e3, eh).value / eh.ceiling - 1) for d in ("exponential", "uniform")
    )
    grid = np.geomspace(0.1, 10.0, 25)
    diff = [
        average_harvested_closed("exponential", m, eh).value - average_harvested_closed("uniform", m, eh).value
        for m in grid
    ]
    crossover = max(diff) > 0 and min(diff) < 0 and diff[0] > 0 and diff[-1] < 0
    return [
        Check("EH at E=1e-4 mW", low < 1e-6, low, 1e-6),
        Check("EH at E=1e3 mW vs eta*P_sat", high <= 0.02, high, 0.02),
        Check("exponential/uniform EH crossover", crossover, min(diff), 0.0),
    ]


def check_bound_tuning(sigma=1.0):
    worst = -math.inf
    for amp in (0.0, 0.5, 3.0, 10.0, 100.0, 1e3):
        sub = r_bar(amp, sigma, suboptimal_params(amp, sigma))
        _, best = minimized_params(amp, sigma)
        worst = max(worst, best - sub)
    return Check("minimized rbar <= suboptimal rbar", worst <= 0.0, worst, 0.0)


def check_determinism(seed=99):
    def trial(rng, count):
        return rng.standard_exponential(count)

    trials = 3 * streams.CHUNK_SIZE + 17
    ref = streams.per_trial(trial, trials, seed, threads=1)
    worst = 0.0
    for threads in (4, 8):
        other = streams.per_trial(trial, trials, seed, threads=threads)
        worst = max(worst, float(np.max(np.abs(other - ref))))
    return Check("Monte Carlo streams independent of thread count", worst == 0.0, worst, 0.0)


CHECKS = [
    check_inverse_identity,
    check_row_norms,
    check_s_diagonal,
    check_rate_forms,
    check_trace,
    check_special_functions,
    check_pdf_normalization,
    check_energy_closed_forms,
    check_energy_mc,
    check_energy_limits,
    check_bound_tuning,
    check_determinism,
]


def run_validate(checks=CHECKS, echo=print):
    """Run every check; returns ``(all_passed, list_of_checks, seconds)``."""
    start = time.perf_counter()
    results = []
    for fn in checks:
        out = fn()
        for check in out if isinstance(out, list) else [out]:
            results.append(check)
            if echo is not None:
                echo(check.line())
    elapsed = time.perf_counter() - start
    ok = all(c.passed for c in results)
    if echo is not None:
        echo(f"{sum(c.passed for c in results)}/{len(results)} checks passed in {elapsed:.1f} s")
    return ok, results, elapsed


def _plain(check):
    # numpy scalars and infinities are not valid JSON
    out = asdict(check)
    out["passed"] = bool(out["passed"])
    for key in ("measured", "tolerance"):
        value = float(out[key])
        out[key] = value if math.isfinite(value) else None
    return out


def report_dict(ok, results, elapsed):
    return {"passed": bool(ok), "seconds": float(elapsed), "checks": [_plain(c) for c in results]}
