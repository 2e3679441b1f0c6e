"""End-to-end experiment on one graph: the three variants across a k grid,
guarantee verification, the stopping-time bias probe, and SVG charts.

Example:
    python3 scripts/make_demo_graph.py /tmp/demo.txt
    python3 scripts/run_grid.py /tmp/demo.txt --model explicit \
        --k 1,2,3 --eps 0.3 --trials 20 --out results/
"""

import argparse
import os

from rismax import plotting
from rismax.harness import (
    ExperimentConfig,
    cmd_bias_probe,
    cmd_gamma,
    cmd_maximize,
    cmd_verify_guarantee,
)
from rismax.oracle import OracleSizeError


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("graph")
    parser.add_argument("--model", choices=("wc", "explicit"), default="wc")
    parser.add_argument("--k", default="1,2,3")
    parser.add_argument("--eps", type=float, default=0.3)
    parser.add_argument("--ell", type=float, default=1.0)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--mc-runs", type=int, default=2000)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default="results")
    args = parser.parse_args()

    config = ExperimentConfig(
        graph=args.graph,
        model=args.model,
        variants=("imm", "w1", "w2"),
        k_values=tuple(int(x) for x in args.k.split(",")),
        eps=args.eps,
        ell=args.ell,
        trials=args.trials,
        seed=args.seed,
        mc_runs=args.mc_runs,
        workers=args.workers,
        out=args.out,
    )
    g = config.load_and_validate()

    records = cmd_maximize(config)
    print(f"maximize: {len(records)} trials -> {args.out}/trials.csv")
    for variant in config.variants:
        rows = [r for r in records if r.variant == variant]
        spread = sum(r.spread_mean for r in rows) / len(rows)
        total_ms = sum(r.time_total_ms for r in rows) / len(rows)
        print(f"  {variant}: mean spread {spread:.3f}, mean time {total_ms:.1f} ms")

    try:
        cmd_verify_guarantee(config)
    except OracleSizeError as exc:
        print(f"guarantee check skipped: {exc}")
    try:
        cmd_bias_probe(config)
    except OracleSizeError as exc:
        print(f"bias probe skipped: {exc}")
    cmd_gamma(g.n, config.k_values[-1], config.eps, config.ell)

    for path in plotting.cmd_plot([os.path.join(args.out, "trials.csv")], args.out):
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
