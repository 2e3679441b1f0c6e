"""Command-line front end."""

from __future__ import annotations

import argparse
import sys

from . import harness, imm, oracle, plotting
from .graph import load_graph

_CONFIG_KEYS = {
    "graph", "model", "variant", "k", "eps", "ell", "trials", "seed",
    "mc-runs", "out", "workers", "timings",
}


def _parse_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise harness.ConfigError(f"{path}:{line_no}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise harness.ConfigError(f"{path}:{line_no}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise harness.ConfigError(f"expected a boolean, got {text!r}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise harness.ConfigError(f"expected comma-separated integers, got {text!r}")


def _variant_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(","))


def build_config(args: argparse.Namespace) -> harness.ExperimentConfig:
    raw: dict[str, str] = {}
    if getattr(args, "config", None):
        raw = _parse_config_file(args.config)
    # flags given on the command line override file entries
    overrides = {
        "graph": args.graph,
        "model": args.model,
        "variant": args.variant,
        "k": args.k,
        "eps": args.eps,
        "ell": args.ell,
        "trials": args.trials,
        "seed": args.seed,
        "mc-runs": args.mc_runs,
        "out": args.out,
        "workers": args.workers,
        "timings": args.timings,
    }
    for key, value in overrides.items():
        if value is not None:
            raw[key] = value
    if "graph" not in raw:
        raise harness.ConfigError("a graph path is required (--graph or config file)")
    try:
        return harness.ExperimentConfig(
            graph=raw["graph"],
            model=raw.get("model", "wc"),
            variants=_variant_list(raw.get("variant", "imm")),
            k_values=_int_list(raw.get("k", "1")),
            eps=float(raw.get("eps", "0.1")),
            ell=float(raw.get("ell", "1.0")),
            trials=int(raw.get("trials", "1")),
            seed=int(raw.get("seed", "0")),
            mc_runs=int(raw.get("mc-runs", "1000")),
            out=raw.get("out"),
            workers=int(raw.get("workers", "1")),
            timings=raw["timings"] if isinstance(raw.get("timings"), bool)
            else _parse_bool(raw.get("timings", "true")),
        )
    except ValueError as exc:
        raise harness.ConfigError(str(exc)) from exc


def _add_experiment_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value config file; flags override it")
    sub.add_argument("--graph", help="edge-list graph path")
    sub.add_argument("--model", choices=("wc", "explicit"))
    sub.add_argument("--variant", help="comma-separated subset of imm,w1,w2")
    sub.add_argument("--k", help="comma-separated seed-set sizes")
    sub.add_argument("--eps", type=float)
    sub.add_argument("--ell", type=float)
    sub.add_argument("--trials", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--mc-runs", type=int, dest="mc_runs")
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--workers", type=int)
    sub.add_argument("--timings", type=_parse_bool,
                     help="false zeroes timing columns for byte-stable CSVs")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rismax",
        description="RR-set based influence maximization with corrected variants",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("maximize", "run the (variant, k, trial) grid and write trial CSV"),
        ("verify-guarantee", "empirical approximation-guarantee check on an oracle-sized graph"),
        ("bias-probe", "conditioned vs unconditional coverage at each loop prefix"),
    ):
        sub = subs.add_parser(name, help=help_text)
        _add_experiment_flags(sub)

    gamma = subs.add_parser("gamma", help="binary-searched confidence inflation")
    gamma.add_argument("--n", type=int, required=True)
    gamma.add_argument("--k", type=int, required=True)
    gamma.add_argument("--eps", type=float, default=0.1)
    gamma.add_argument("--ell", type=float, default=1.0)

    plot = subs.add_parser("plot", help="render spread/time SVG charts from trial CSVs")
    plot.add_argument("csv", nargs="+", help="trial CSV files")
    plot.add_argument("--out", required=True, help="output directory")

    orc = subs.add_parser("oracle", help="exact optimum on a small graph")
    orc.add_argument("--graph", required=True)
    orc.add_argument("--model", choices=("wc", "explicit"), default="wc")
    orc.add_argument("--k", type=int, required=True)
    orc.add_argument("--seeds", help="comma-separated node ids to score instead")
    return parser


def _run(args: argparse.Namespace) -> int:
    if args.command == "maximize":
        config = build_config(args)
        records = harness.cmd_maximize(config)
        for rec in records:
            print(
                f"maximize variant={rec.variant} k={rec.k} seed={rec.seed} "
                f"theta_tilde={rec.theta_tilde} spread={rec.spread_mean:.4f}"
                + (f" success={int(rec.success)}" if rec.success is not None else "")
            )
        if config.out:
            print(f"wrote {config.out}/trials.csv")
        return 0
    if args.command == "verify-guarantee":
        harness.cmd_verify_guarantee(build_config(args))
        return 0
    if args.command == "bias-probe":
        harness.cmd_bias_probe(build_config(args))
        return 0
    if args.command == "gamma":
        harness.cmd_gamma(args.n, args.k, args.eps, args.ell)
        return 0
    if args.command == "plot":
        for path in plotting.cmd_plot(args.csv, args.out):
            print(f"wrote {path}")
        return 0
    if args.command == "oracle":
        g = load_graph(args.graph, args.model)
        if args.seeds:
            seeds = _int_list(args.seeds)
            print(f"sigma({','.join(map(str, seeds))}) = {oracle.exact_sigma(g, seeds)!r}")
        else:
            opt, best = oracle.exact_opt(g, args.k)
            print(f"OPT(k={args.k}) = {opt!r} at seeds {','.join(map(str, best))}")
        return 0
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except (harness.ConfigError, harness.SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
