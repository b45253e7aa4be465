"""Command-line interface.

Subcommands: ``kernel``, ``stationary``, ``simulate``, ``sweep``,
``inequality``, ``figures``. Every flag can also be supplied through a JSON
config file (``--config``); explicit flags win. Exit codes are stable for
scripting: 0 success, 1 I/O failure, 2 usage or validation error, 3
numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dynamics import DEFAULT_BURN_IN, ergodic_deviation, run, save_trajectory
from .experiments import (
    Method,
    OutputKind,
    SweepSpec,
    reproduce_figures,
    solve_stationary,
    sweep,
)
from .formats import fmt
from .inequality import (
    income_distribution,
    lorenz_gini,
    write_lorenz_csv,
    write_summary_json,
)
from .kernel import (
    ConvergenceError,
    HALF_RULES,
    build_kernel,
    fixed_point_residual,
    stationary_mean,
    stationary_power,
    write_distribution_csv,
    write_kernel_csv,
)
from .model import MarketState, ModelParams, ParameterError

_REQUIRED = object()


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=None, help="number of producers")
    parser.add_argument("--temperature", type=float, default=None,
                        help="behavior scale T > 0")
    parser.add_argument("--payoff-short", type=float, default=None,
                        help="short-side payoff (default 1)")
    parser.add_argument("--payoff-long", type=float, default=None,
                        help="long-side payoff (default 0)")


def _add_config_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, metavar="PATH",
                        help="JSON file supplying any flag; explicit flags win")


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """Merge flag values over config-file values over hard defaults."""
    config = {}
    if args.config is not None:
        with open(args.config) as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise ParameterError("config file must contain a JSON object")
        unknown = sorted(set(config) - set(defaults))
        if unknown:
            raise ParameterError(f"unknown config keys: {', '.join(unknown)}")
    resolved = {}
    for key, default in defaults.items():
        value = getattr(args, key)
        if value is None:
            value = config.get(key, default)
        if value is _REQUIRED:
            raise ParameterError(f"missing required option --{key.replace('_', '-')}")
        resolved[key] = value
    return resolved


def _params(options: dict) -> ModelParams:
    return ModelParams(
        n_producers=options["n"],
        temperature=options["temperature"],
        payoff_short=options["payoff_short"],
        payoff_long=options["payoff_long"],
    )


_PARAM_DEFAULTS = {
    "n": _REQUIRED,
    "temperature": _REQUIRED,
    "payoff_short": 1.0,
    "payoff_long": 0.0,
}


def cmd_kernel(args: argparse.Namespace) -> int:
    options = _resolve(args, {**_PARAM_DEFAULTS, "half_rule": "half", "out": _REQUIRED})
    kernel = build_kernel(_params(options), options["half_rule"])
    write_kernel_csv(kernel, options["out"])
    print(f"wrote {options['out']} ({kernel.n_states}x{kernel.n_states})")
    return 0


def cmd_stationary(args: argparse.Namespace) -> int:
    options = _resolve(args, {**_PARAM_DEFAULTS, "method": "analytic",
                              "tol": 1e-12, "max_iters": 10000, "out": _REQUIRED})
    params = _params(options)
    method = Method(options["method"])
    if method is Method.POWER:
        dist = stationary_power(build_kernel(params), tol=options["tol"],
                                max_iters=options["max_iters"])
    else:
        dist = solve_stationary(params, method)
    write_distribution_csv(dist, options["out"])
    summary = {
        "method": method.value,
        "mean_corn_fraction": stationary_mean(dist),
        "residual_l1": fixed_point_residual(dist, params),
        "n_producers": params.n_producers,
        "temperature": params.temperature,
    }
    summary_path = _sidecar(options["out"], ".summary.json")
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {options['out']} mean={fmt(summary['mean_corn_fraction'])} "
          f"residual={fmt(summary['residual_l1'])}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    options = _resolve(args, {
        **_PARAM_DEFAULTS,
        "periods": _REQUIRED,
        "burn_in": DEFAULT_BURN_IN,
        "seed": 0,
        "initial": None,
        "producer_level": False,
        "out": _REQUIRED,
    })
    params = _params(options)
    initial_count = options["initial"]
    if initial_count is None:
        initial_count = params.n_producers // 2
    initial = MarketState(initial_count, params.n_producers)
    traj = run(params, initial, options["periods"], options["burn_in"],
               options["seed"], producer_level=bool(options["producer_level"]))
    csv_path, meta_path = save_trajectory(traj, options["out"])
    exact = solve_stationary(params, Method.ANALYTIC)
    print(f"wrote {csv_path} and {meta_path}")
    print(f"tv_empirical_exact={fmt(ergodic_deviation(traj, exact))}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    options = _resolve(args, {
        "n": _REQUIRED,
        "temperatures": _REQUIRED,
        "outputs": "stationary",
        "method": "analytic",
        "out_dir": _REQUIRED,
        "threads": None,
    })
    spec = SweepSpec(
        n_producers=options["n"],
        temperatures=_parse_list(options["temperatures"], float),
        outputs=frozenset(OutputKind(name)
                          for name in _parse_list(options["outputs"], str)),
        method=Method(options["method"]),
        output_dir=options["out_dir"],
    )
    manifest = sweep(spec, threads=options["threads"])
    print(f"wrote {len(manifest['artifacts'])} artifacts to {spec.output_dir} "
          f"({len(manifest['failures'])} failures)")
    return 0


def cmd_inequality(args: argparse.Namespace) -> int:
    options = _resolve(args, {**_PARAM_DEFAULTS, "method": "analytic",
                              "out": _REQUIRED})
    params = _params(options)
    dist = solve_stationary(params, Method(options["method"]))
    p_win = income_distribution(params, dist)
    result = lorenz_gini(p_win, params.payoff_short, params.payoff_long)
    write_lorenz_csv(result, options["out"])
    write_summary_json(p_win, result, _sidecar(options["out"], ".summary.json"))
    print(f"p_win={fmt(p_win)} gini={fmt(result.gini)}")
    return 0


def cmd_figures(args: argparse.Namespace) -> int:
    options = _resolve(args, {"out_dir": _REQUIRED, "threads": None})
    manifest = reproduce_figures(options["out_dir"], threads=options["threads"])
    print(f"wrote {len(manifest['artifacts'])} artifacts to {options['out_dir']} "
          f"({len(manifest['failures'])} failures)")
    return 0


def _sidecar(path: str, suffix: str) -> str:
    p = Path(path)
    return str(p.with_name(p.stem + suffix))


def _parse_list(value, item_type):
    if isinstance(value, str):
        items = [part.strip() for part in value.split(",") if part.strip()]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        raise ParameterError(f"expected a comma-separated list, got {value!r}")
    return tuple(item_type(item) for item in items)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravitation",
        description="Exact kernels, ergodic distributions, simulations, and "
                    "inequality metrics for the two-good producer-migration model.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("kernel", help="write the transition kernel as CSV")
    _add_param_flags(p)
    p.add_argument("--half-rule", choices=HALF_RULES, default=None,
                   help="choice probability at the balanced row (default half)")
    p.add_argument("--out", default=None, metavar="PATH")
    _add_config_flag(p)
    p.set_defaults(handler=cmd_kernel)

    p = sub.add_parser("stationary", help="solve the stationary distribution")
    _add_param_flags(p)
    p.add_argument("--method", choices=[m.value for m in Method], default=None)
    p.add_argument("--tol", type=float, default=None,
                   help="L1 residual tolerance for the power method")
    p.add_argument("--max-iters", type=int, default=None,
                   help="iteration cap for the power method")
    p.add_argument("--out", default=None, metavar="PATH")
    _add_config_flag(p)
    p.set_defaults(handler=cmd_stationary)

    p = sub.add_parser("simulate", help="run a seeded Monte Carlo trajectory")
    _add_param_flags(p)
    p.add_argument("--periods", type=int, default=None)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--initial", type=int, default=None,
                   help="initial corn count (default N//2)")
    p.add_argument("--producer-level", action="store_const", const=True, default=None,
                   help="debug mode: one coin flip per producer per period")
    p.add_argument("--out", default=None, metavar="PATH")
    _add_config_flag(p)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("sweep", help="evaluate the exact solvers over a T grid")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--temperatures", default=None,
                   help="comma-separated increasing positive values")
    p.add_argument("--outputs", default=None,
                   help="comma-separated subset of stationary,mean,"
                        "choice_frequencies,gini")
    p.add_argument("--method", choices=[m.value for m in Method], default=None)
    p.add_argument("--out-dir", default=None, metavar="DIR")
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap (falls back to $GRAVITATION_THREADS, then cores)")
    _add_config_flag(p)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("inequality", help="Lorenz curve and Gini of ergodic income")
    _add_param_flags(p)
    p.add_argument("--method", choices=[m.value for m in Method], default=None)
    p.add_argument("--out", default=None, metavar="PATH")
    _add_config_flag(p)
    p.set_defaults(handler=cmd_inequality)

    p = sub.add_parser("figures", help="reproduce the three canonical figures")
    p.add_argument("--out-dir", default=None, metavar="DIR")
    p.add_argument("--threads", type=int, default=None)
    _add_config_flag(p)
    p.set_defaults(handler=cmd_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.handler(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
