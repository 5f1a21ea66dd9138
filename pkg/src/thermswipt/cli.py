"""Command-line entry point: ``rate-sweep``, ``eh-sweep``, ``trace``, ``validate``.

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""

import argparse
import json
import sys
from pathlib import Path

from .sweeps import (
    RESULT_COLUMNS,
    TRACE_COLUMNS,
    ConfigError,
    dump_config,
    rows_to_csv,
    run_energy_sweep,
    run_rate_sweep,
    run_trace,
    spec_from_dict,
)
from .validate import report_dict, run_validate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2

_KIND = {"rate-sweep": "rate", "eh-sweep": "energy", "trace": "trace", "validate": "validate"}


def _add_common(p):
    p.add_argument("--config", type=Path, help="JSON configuration file")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--n", dest="n_list", help="comma-separated channel-use counts, e.g. 4,6")
    p.add_argument("--power-grid", dest="power_grid",
                   help="log:lo:hi:n, lin:lo:hi:n, db:lo:hi:n or a comma list (mW)")
    p.add_argument("--dists", dest="distributions", help="exp,uni")
    p.add_argument("--bound", choices=["off", "sub", "min"])
    p.add_argument("--baseline", action="store_true", default=None)
    p.add_argument("--zero-noise", dest="zero_noise", action="store_true", default=None)
    p.add_argument("--out", type=Path, help="output CSV path (default: stdout)")
    p.add_argument("--threads", type=int)


def build_parser():
    parser = argparse.ArgumentParser(prog="thermswipt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("rate-sweep", "ergodic achievable rates, capacity bound, PS baseline"),
        ("eh-sweep", "average harvested power: closed form, quadrature, Monte Carlo"),
        ("trace", "one simulated temperature trace"),
    ):
        _add_common(sub.add_parser(name, help=help_text))
    v = sub.add_parser("validate", help="run the self-check suite")
    v.add_argument("--out", type=Path, help="write the JSON report here")
    return parser


def _load_spec(args, kind):
    data = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError({"config": str(exc)}) from None
        if not isinstance(data, dict):
            raise ConfigError({"config": "top level must be a JSON object"})
    overrides = {
        "kind": kind,
        "seed": args.seed,
        "trials": args.trials,
        "n_list": args.n_list,
        "power_grid": args.power_grid,
        "distributions": args.distributions,
        "bound": args.bound,
        "baseline": args.baseline,
        "zero_noise": args.zero_noise,
        "threads": args.threads,
    }
    return spec_from_dict(data, overrides)


def _emit(text, out, spec):
    if out is None:
        sys.stdout.write(text)
        return
    out.write_text(text, newline="")
    sidecar = out.with_name(out.name + ".config.json")
    sidecar.write_text(dump_config(spec) + "\n")


def main(argv=None):
    args = build_parser().parse_args(argv)
    kind = _KIND[args.command]

    if kind == "validate":
        ok, results, elapsed = run_validate()
        if args.out is not None:
            args.out.write_text(json.dumps(report_dict(ok, results, elapsed), indent=2) + "\n")
        return EXIT_OK if ok else EXIT_VALIDATION

    try:
        spec = _load_spec(args, kind)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if kind == "rate":
        text = rows_to_csv(run_rate_sweep(spec), RESULT_COLUMNS)
    elif kind == "energy":
        text = rows_to_csv(run_energy_sweep(spec), RESULT_COLUMNS)
    else:
        text = rows_to_csv(run_trace(spec), TRACE_COLUMNS)
    _emit(text, args.out, spec)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
