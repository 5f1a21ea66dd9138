"""Adaptive Gauss-Kronrod integration and a bounded 2-D minimizer.

The integrator is the reference against which every closed form in the
package is checked, so it is kept deliberately simple: globally adaptive
bisection with a 7/15-point Gauss-Kronrod pair, the Kronrod-minus-Gauss
difference as the error estimate, and an open rule so that integrable
endpoint singularities (``K_0`` near zero, ``E_1`` near zero) are never
evaluated.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

__all__ = [
    "IntegrationResult",
    "IntegrationError",
    "integrate",
    "minimize_2d",
]

# 15-point Kronrod abscissae (non-negative half) and weights, with the
# embedded 7-point Gauss weights at abscissae 1, 3, 5, 7.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

ABS_FLOOR = 1e-15
MAX_EVALUATIONS = 1_000_000


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    abs_error_estimate: float
    evaluations: int


class IntegrationError(RuntimeError):
    """Raised when the evaluation budget is exhausted before convergence.

    The best available estimate is attached as ``result``.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


def _rule(g, a, b):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fx = np.array([g(center + half * t) for t in NODES], dtype=float)
    kronrod = half * float(KRONROD_WEIGHTS @ fx)
    gauss = half * float(GAUSS_WEIGHTS @ fx)
    return kronrod, abs(kronrod - gauss)


def integrate(f, lo, hi, rel_tol=1e-10, max_evaluations=MAX_EVALUATIONS, abs_tol=ABS_FLOOR):
    """Integrate ``f`` over ``[lo, hi]``; ``hi`` may be ``math.inf``.

    A semi-infinite range is mapped onto ``[0, 1)`` with
    ``t = lo + u / (1 - u)``.

    Parameters
    ----------
    f : callable
        Scalar function of one real variable.
    lo, hi : float
        Integration limits, ``lo < hi`` (``lo == hi`` gives zero).
    rel_tol : float
        Target relative accuracy, in ``(1e-14, 1e-2)``.
    max_evaluations : int
        Budget of integrand calls.
    abs_tol : float
        Absolute error accepted when ``rel_tol * |value|`` is smaller.

    Returns
    -------
    IntegrationResult

    Raises
    ------
    IntegrationError
        If the budget is exhausted; carries the best estimate.
    """
    if not 1e-14 < rel_tol < 1e-2:
        raise ValueError(f"rel_tol must lie in (1e-14, 1e-2), got {rel_tol!r}")
    lo = float(lo)
    hi = float(hi)
    if math.isinf(lo):
        raise ValueError("lower limit must be finite")
    if hi == lo:
        return IntegrationResult(0.0, 0.0, 1)
    if hi < lo:
        res = integrate(f, hi, lo, rel_tol, max_evaluations, abs_tol)
        return IntegrationResult(-res.value, res.abs_error_estimate, res.evaluations)

    if math.isinf(hi):
        def g(u):
            one_minus = 1.0 - u
            return f(lo + u / one_minus) / (one_minus * one_minus)
        a, b = 0.0, 1.0
    else:
        g = f
        a, b = lo, hi

    value, err = _rule(g, a, b)
    evaluations = 15
    # max-heap on error: store negated error
    heap = [(-err, a, b, value)]
    total_value, total_err = value, err
    while total_err > max(rel_tol * abs(total_value), abs_tol):
        if evaluations + 30 > max_evaluations:
            best = IntegrationResult(total_value, total_err, evaluations)
            raise IntegrationError(
                f"no convergence after {evaluations} evaluations "
                f"(estimate {total_value!r}, error {total_err!r})",
                best,
            )
        neg_err, a0, b0, v0 = heapq.heappop(heap)
        mid = 0.5 * (a0 + b0)
        if not a0 < mid < b0:
            # interval cannot be split further in floating point
            heapq.heappush(heap, (0.0, a0, b0, v0))
            total_err += neg_err
            continue
        v1, e1 = _rule(g, a0, mid)
        v2, e2 = _rule(g, mid, b0)
        evaluations += 30
        total_value += v1 + v2 - v0
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, a0, mid, v1))
        heapq.heappush(heap, (-e2, mid, b0, v2))
        if len(heap) % 64 == 0:
            # resum to keep incremental rounding from drifting
            total_value = math.fsum(item[3] for item in heap)
            total_err = math.fsum(-item[0] for item in heap)
    total_value = math.fsum(item[3] for item in heap)
    return IntegrationResult(total_value, max(total_err, 0.0), evaluations)


def minimize_2d(f, box, tol=1e-10, grid=64, candidates=(), vectorized=False):
    """Minimize ``f(x, y)`` over a rectangle by grid search plus refinement.

    Parameters
    ----------
    f : callable
        ``f(x, y) -> float``. With ``vectorized=True`` it must also accept
        broadcastable arrays and return an array of the broadcast shape.
    box : ((float, float), (float, float))
        ``((x_lo, x_hi), (y_lo, y_hi))``.
    tol : float
        Tolerance passed to the bounded local refinement.
    grid : int
        Nodes per axis of the initial search grid.
    candidates : iterable of (float, float)
        Extra points (e.g. a known good suboptimal choice) that the returned
        minimum is guaranteed not to exceed when they lie inside the box.

    Returns
    -------
    point : (float, float)
    value : float
    """
    (x_lo, x_hi), (y_lo, y_hi) = box
    xs = np.linspace(x_lo, x_hi, grid)
    ys = np.linspace(y_lo, y_hi, grid)
    if vectorized:
        values = np.asarray(f(xs[:, None], ys[None, :]), dtype=float)
        values = np.broadcast_to(values, (grid, grid))
    else:
        values = np.array([[f(x, y) for y in ys] for x in xs], dtype=float)
    values = np.where(np.isnan(values), np.inf, values)
    i, j = np.unravel_index(np.argmin(values), values.shape)
    best_point = (float(xs[i]), float(ys[j]))
    best_value = float(values[i, j])

    for cx, cy in candidates:
        if x_lo <= cx <= x_hi and y_lo <= cy <= y_hi:
            cv = float(f(cx, cy))
            if cv < best_value:
                best_point, best_value = (float(cx), float(cy)), cv

    if x_hi > x_lo or y_hi > y_lo:
        res = optimize.minimize(
            lambda p: float(f(p[0], p[1])),
            np.array(best_point),
            method="L-BFGS-B",
            bounds=[(x_lo, x_hi), (y_lo, y_hi)],
            options={"ftol": tol, "gtol": tol},
        )
        if np.isfinite(res.fun) and res.fun < best_value:
            best_point = (float(res.x[0]), float(res.x[1]))
            best_value = float(res.fun)
    return best_point, best_value
