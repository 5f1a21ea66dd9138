"""Sweep configuration and the rate / energy / trace sweeps behind the CLI.

Every sweep point reuses the run seed, so curves across ``E`` (and the rate
versus bound rows at one ``E``) are computed on common fading draws.
"""

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import streams
from .baseline import PsConfig, ps_energy, ps_rate
from .bound import ergodic_capacity_bound
from .channel import (
    INPUT_DISTRIBUTIONS,
    ThermalParams,
    sample_input_power,
    sample_rayleigh_gains,
    simulate_trace,
)
from .energy import (
    EhParams,
    average_harvested_closed,
    average_harvested_mc,
    average_harvested_quadrature,
)
from .rates import RateConfig, ergodic_rate, snr_db

__all__ = [
    "ConfigError",
    "SweepSpec",
    "ResultRow",
    "RESULT_COLUMNS",
    "TRACE_COLUMNS",
    "parse_power_grid",
    "spec_from_dict",
    "run_rate_sweep",
    "run_energy_sweep",
    "run_trace",
    "rows_to_csv",
]

KINDS = ("rate", "energy", "trace", "validate")
BOUND_MODES = ("off", "suboptimal", "minimized")
_DIST_ALIASES = {"exp": "exponential", "uni": "uniform", "exponential": "exponential", "uniform": "uniform"}
_BOUND_ALIASES = {"off": "off", "sub": "suboptimal", "min": "minimized",
                  "suboptimal": "suboptimal", "minimized": "minimized"}

RATE_GRID_DEFAULT = "log:1:1e4:21"
ENERGY_GRID_DEFAULT = "log:0.1:10:25"

RESULT_COLUMNS = ("N", "E_mW", "SNR_dB", "distribution", "metric", "value", "std_error", "method")
TRACE_COLUMNS = ("slot", "S_i", "h_i", "P_i", "T_i")


class ConfigError(ValueError):
    """Invalid sweep configuration; ``problems`` maps field name to message."""

    def __init__(self, problems):
        self.problems = dict(problems)
        listing = "; ".join(f"{k}: {v}" for k, v in self.problems.items())
        super().__init__(f"invalid configuration ({listing})")


def parse_power_grid(spec):
    """Parse ``"log:lo:hi:n"``, ``"lin:lo:hi:n"``, ``"db:lo_db:hi_db:n"`` or ``"1,2,5"``."""
    if isinstance(spec, (list, tuple)):
        values = [float(v) for v in spec]
    else:
        text = str(spec).strip()
        head, _, rest = text.partition(":")
        if rest:
            parts = rest.split(":")
            if len(parts) != 3:
                raise ValueError(f"expected {head}:lo:hi:n, got {text!r}")
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError("grid needs at least one point")
            if head == "log":
                values = np.geomspace(lo, hi, n).tolist()
            elif head == "lin":
                values = np.linspace(lo, hi, n).tolist()
            elif head == "db":
                values = (10.0 ** (np.linspace(lo, hi, n) / 10.0)).tolist()
            else:
                raise ValueError(f"unknown grid spacing {head!r}")
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValueError("power grid is empty")
    if any(not (v >= 0 and math.isfinite(v)) for v in values):
        raise ValueError("power grid values must be finite and >= 0")
    return tuple(values)


@dataclass(frozen=True)
class SweepSpec:
    kind: str = "rate"
    n_list: tuple = (4, 6)
    power_grid: tuple = None
    distributions: tuple = INPUT_DISTRIBUTIONS
    trials: int = 10_000
    seed: int = 1
    thermal: ThermalParams = field(default_factory=ThermalParams)
    eh: EhParams = field(default_factory=EhParams)
    bound: str = "suboptimal"
    baseline: bool = False
    rho: float = 0.5
    threads: int = 1
    bound_log_base: str = "nat"
    zero_noise: bool = False

    def resolved_grid(self):
        if self.power_grid is not None:
            return tuple(self.power_grid)
        default = ENERGY_GRID_DEFAULT if self.kind == "energy" else RATE_GRID_DEFAULT
        return parse_power_grid(default)

    def to_dict(self):
        out = asdict(self)
        out["power_grid"] = list(self.resolved_grid())
        out["n_list"] = list(self.n_list)
        out["distributions"] = list(self.distributions)
        return out


def spec_from_dict(data, overrides=None):
    """Build and validate a :class:`SweepSpec` from JSON data plus overrides.

    Raises
    ------
    ConfigError
        Listing every offending field.
    """
    merged = dict(data or {})
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    problems = {}
    known = {f.name for f in fields(SweepSpec)}
    for key in merged:
        if key not in known:
            problems[key] = "unknown field"

    kwargs = {}

    def take(name, convert):
        if name not in merged:
            return
        try:
            kwargs[name] = convert(merged[name])
        except (TypeError, ValueError) as exc:
            problems[name] = str(exc)

    def kind(v):
        if v not in KINDS:
            raise ValueError(f"must be one of {KINDS}")
        return v

    def n_list(v):
        items = [int(x) for x in (v.split(",") if isinstance(v, str) else v)]
        if not items or any(n < 1 for n in items):
            raise ValueError("channel-use counts must be >= 1")
        return tuple(items)

    def dists(v):
        items = v.split(",") if isinstance(v, str) else list(v)
        try:
            out = tuple(_DIST_ALIASES[x.strip()] for x in items)
        except KeyError as exc:
            raise ValueError(f"unknown distribution {exc.args[0]!r}") from None
        if not out:
            raise ValueError("at least one distribution is required")
        return out

    def positive_int(v):
        v = int(v)
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    def seed(v):
        v = int(v)
        if not 0 <= v < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        return v

    def bound(v):
        try:
            return _BOUND_ALIASES[v]
        except KeyError:
            raise ValueError("must be one of off|sub|min") from None

    def thermal(v):
        return v if isinstance(v, ThermalParams) else ThermalParams(**v)

    def eh(v):
        return v if isinstance(v, EhParams) else EhParams(**v)

    def rho(v):
        v = float(v)
        if not 0.0 <= v <= 1.0:
            raise ValueError("rho must lie in [0, 1]")
        return v

    def log_base(v):
        v = {"as-printed": "mixed"}.get(v, v)
        if v not in ("nat", "mixed"):
            raise ValueError("must be nat or mixed")
        return v

    take("kind", kind)
    take("n_list", n_list)
    take("power_grid", parse_power_grid)
    take("distributions", dists)
    take("trials", positive_int)
    take("seed", seed)
    take("thermal", thermal)
    take("eh", eh)
    take("bound", bound)
    take("baseline", bool)
    take("rho", rho)
    take("threads", positive_int)
    take("bound_log_base", log_base)
    take("zero_noise", bool)
    if problems:
        raise ConfigError(problems)
    return SweepSpec(**kwargs)


@dataclass(frozen=True)
class ResultRow:
    n: object
    mean_power: float
    snr_db: float
    distribution: str
    metric: str
    value: float
    std_error: float
    method: str

    def cells(self):
        return (self.n, self.mean_power, self.snr_db, self.distribution,
                self.metric, self.value, self.std_error, self.method)


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return "" if v is None else str(v)


def rows_to_csv(rows, columns=RESULT_COLUMNS):
    """Render rows as RFC-4180 CSV text (CRLF line ends, 17 significant digits)."""
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        cells = row.cells() if hasattr(row, "cells") else row
        writer.writerow([_fmt(c) for c in cells])
    return buf.getvalue()


def _map_points(fn, points, threads):
    if threads <= 1 or len(points) <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, points))


def run_rate_sweep(spec):
    """Ergodic rates (and optionally bound and PS baseline) over ``(N, E)``."""
    sigma2 = spec.thermal.sigma2
    points = [(n, e) for n in spec.n_list for e in spec.resolved_grid()]

    def work(point):
        n, e = point
        cfg = RateConfig(e, sigma2, n)
        snr = snr_db(e, sigma2)
        out = []
        for dist in spec.distributions:
            est = ergodic_rate(dist, spec.thermal, cfg, spec.trials, spec.seed)
            out.append(ResultRow(n, e, snr, dist, "ergodic_rate", est.mean, est.std_error, "monte_carlo"))
        if spec.bound != "off":
            est = ergodic_capacity_bound(
                spec.thermal, cfg, spec.trials, spec.seed, tune=spec.bound, log_base=spec.bound_log_base
            )
            out.append(ResultRow(n, e, snr, "", "capacity_bound", est.mean, est.std_error, spec.bound))
        if spec.baseline:
            est = ps_rate(PsConfig(spec.rho, e, sigma2), spec.trials, spec.seed)
            out.append(ResultRow(n, e, snr, "gaussian", "ps_rate", est.mean, est.std_error, "monte_carlo"))
        return out

    return [row for chunk in _map_points(work, points, spec.threads) for row in chunk]


def run_energy_sweep(spec):
    """Average harvested power per ``(E, distribution)`` by all three methods."""
    sigma2 = spec.thermal.sigma2

    def work(e):
        snr = snr_db(e, sigma2)
        out = []
        for dist in spec.distributions:
            if e > 0:
                closed = average_harvested_closed(dist, e, spec.eh)
                quad = average_harvested_quadrature(dist, e, spec.eh)
            else:
                closed = quad = None
            mc = average_harvested_mc(dist, e, spec.eh, spec.trials, spec.seed)
            for est in (closed, quad, mc):
                if est is None:
                    continue
                std = est.abs_error / 3.0 if est.method == "monte_carlo" else est.abs_error
                out.append(ResultRow("", e, snr, dist, "harvested_power_mW", est.value, std, est.method))
        if spec.baseline:
            est = ps_energy(PsConfig(spec.rho, e, sigma2), spec.eh, spec.trials, spec.seed)
            out.append(ResultRow("", e, snr, "constant", "ps_harvested_power_mW",
                                 est.value, est.abs_error / 3.0, "monte_carlo"))
        return out

    return [row for chunk in _map_points(work, list(spec.resolved_grid()), spec.threads) for row in chunk]


def run_trace(spec):
    """One temperature trace: rows ``(slot, S_i, h_i, P_i, T_i)``.

    Uses the first entry of ``n_list``, the first power in the grid and the
    first input distribution. The final row carries ``T_{N+1}`` only.
    """
    n = spec.n_list[0]
    mean = spec.resolved_grid()[0]
    dist = spec.distributions[0]
    rng = streams.stream(spec.seed, 0)
    real = sample_rayleigh_gains(n, rng)
    s = sample_input_power(dist, mean, rng, size=n)
    noise = None if spec.zero_noise else math.sqrt(spec.thermal.sigma2) * rng.standard_normal(n)
    trace = simulate_trace(spec.thermal, real, s, noise)
    rows = [
        (i + 1, float(s[i]), float(real.gains[i]), float(trace.powers[i]), float(trace.temps[i]))
        for i in range(n)
    ]
    rows.append((n + 1, None, None, None, float(trace.temps[n])))
    return rows


def dump_config(spec):
    return json.dumps(spec.to_dict(), indent=2, sort_keys=True)
