#!/usr/bin/env python3
"""Monte Carlo sweep over a (dimension, n, interval) grid.

For every cell the four headline metrics are estimated: full-recovery rate
from cliques alone, full-recovery rate after deduction, mean proportion of
distinct rows recovered by deduction, and the same after likelihood-based
selection.

Usage:
    python scripts/run_grid.py --trials 200 --seed 7 -o grid.json
    python scripts/run_grid.py --dims 4,5,6 --ns 8,16,32 --intervals 8,16
"""

import argparse
import json

from bivrecon.io import write_text_atomic
from bivrecon.simulate import TrialConfig, run_trials


def int_list(text):
    return [int(part) for part in text.split(",") if part.strip()]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", type=int_list, default=[4, 5, 6])
    parser.add_argument("--ns", type=int_list, default=[8, 16, 32])
    parser.add_argument("--intervals", type=int_list, default=[8, 16])
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("-o", "--output", default=None)
    args = parser.parse_args()

    cells = []
    header = f"{'dim':>4} {'n':>5} {'interval':>9} {'cliques':>8} {'tuples':>7} {'prop':>6} {'prop+lik':>9}"
    print(header)
    print("-" * len(header))
    for dim in args.dims:
        for n in args.ns:
            for interval in args.intervals:
                config = TrialConfig(
                    dimension=dim,
                    n=n,
                    interval=interval,
                    trials=args.trials,
                    seed=args.seed,
                    stage="tuples_plus_likelihood",
                )
                report = run_trials(config, workers=args.threads)
                cell = {
                    "dimension": dim,
                    "n": n,
                    "interval": interval,
                    "trials_run": report.trials_run,
                    "excluded": report.excluded,
                    "means": report.means,
                    "se": report.se,
                }
                cells.append(cell)
                m = report.means
                print(
                    f"{dim:>4} {n:>5} {interval:>9} "
                    f"{m['clique_recovery']:>8.3f} {m['tuples_recovery']:>7.3f} "
                    f"{m['proportion_tuples']:>6.3f} {m['proportion_selected']:>9.3f}"
                )

    if args.output:
        doc = {
            "kind": "grid-report",
            "trials": args.trials,
            "seed": args.seed,
            "cells": cells,
        }
        write_text_atomic(args.output, json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
