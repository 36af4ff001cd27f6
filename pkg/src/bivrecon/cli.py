"""Command-line surface: project, reconstruct, simulate, embed, oracle.

Exit codes: 0 on success, 1 on recoverable data errors, 2 on usage errors.
All randomness flows from --seed (or the BIVRECON_SEED environment variable;
the flag wins).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .embed import accuracy_plot_spec, likelihood_plot_spec, mds_2d, pca_2d, render_plot
from .errors import InvalidOptions, ReconstructionError
from .graph import DEFAULT_CANDIDATE_CAP
from .io import (
    candidates_from_report,
    load_dataset_csv,
    projection_from_text,
    projection_to_text,
    report_from_text,
    report_to_text,
    run_oracle_on_report,
    run_pipeline,
    scores_from_report,
    write_text_atomic,
)
from .likelihood import DEFAULT_ORACLE_CAP
from .model import distinct_rows, project
from .simulate import RNG_DESCRIPTION, STAGES, TrialConfig, run_trials

SEED_ENV_VAR = "BIVRECON_SEED"


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        write_text_atomic(output, text)


def _split_columns(value: Optional[str]) -> Optional[list[str]]:
    if value is None:
        return None
    parts = [p.strip() for p in value.split(",") if p.strip()]
    if not parts:
        raise InvalidOptions("empty column selection")
    return parts


def _resolve_seed(flag: Optional[int]) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InvalidOptions(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
    return 0


def _cmd_project(args) -> int:
    dataset = load_dataset_csv(
        args.csv, columns=_split_columns(args.columns), header=not args.no_header
    )
    proj = project(dataset)
    _emit(projection_to_text(proj), args.output)
    return 0


def _cmd_reconstruct(args) -> int:
    with open(args.projections, encoding="utf-8") as fh:
        proj = projection_from_text(fh.read())
    truth = None
    if args.truth:
        truth_ds = load_dataset_csv(
            args.truth,
            columns=_split_columns(args.truth_columns),
            header=not args.no_header,
        )
        truth = set(distinct_rows(truth_ds))
    report = run_pipeline(
        proj,
        distinct_count=args.distinct_count,
        weight_mode=args.weight_mode,
        truth=truth,
        candidate_cap=args.candidate_cap,
    )
    _emit(report_to_text(report), args.output)
    return 0


def _cmd_simulate(args) -> int:
    config = TrialConfig(
        dimension=args.dim,
        n=args.n,
        interval=args.interval,
        trials=args.trials,
        seed=_resolve_seed(args.seed),
        stage=args.stage,
        weight_mode=args.weight_mode,
        candidate_cap=args.candidate_cap,
    )
    report = run_trials(config, workers=args.threads)
    doc = {
        "kind": "simulation-report",
        "config": {
            "dimension": config.dimension,
            "n": config.n,
            "intervals": list(config.intervals),
            "trials": config.trials,
            "seed": config.seed,
            "stage": config.stage,
            "weight_mode": config.weight_mode,
            "candidate_cap": config.candidate_cap,
        },
        "rng": RNG_DESCRIPTION,
        "trials_run": report.trials_run,
        "excluded": report.excluded,
        "means": report.means,
        "se": report.se,
        "records": report.records,
    }
    _emit(json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n", args.output)
    return 0


def _cmd_embed(args) -> int:
    with open(args.report, encoding="utf-8") as fh:
        report = report_from_text(fh.read())
    cands = candidates_from_report(report)
    emb = pca_2d(cands) if args.method == "pca" else mds_2d(cands)
    deduced = frozenset(k for k, _rule in report["deduced"])
    if args.color == "likelihood":
        spec = likelihood_plot_spec(deduced, scores_from_report(report), len(cands))
    else:
        if not report.get("confusion"):
            raise InvalidOptions(
                "accuracy coloring requires a report produced with --truth"
            )
        spec = accuracy_plot_spec(report["confusion"])
    _emit(render_plot(emb, spec), args.output)
    return 0


def _cmd_oracle(args) -> int:
    with open(args.report, encoding="utf-8") as fh:
        report = report_from_text(fh.read())
    doc = run_oracle_on_report(report, cap=args.cap)
    _emit(json.dumps(doc, ensure_ascii=False, indent=2) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bivrecon",
        description="Reconstruct discrete datasets from their pairwise projections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="extract pairwise projections from a CSV")
    p.add_argument("csv")
    p.add_argument("--columns", help="comma-separated column names or 0-based indices")
    p.add_argument("--no-header", action="store_true", help="CSV has no header row")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(fn=_cmd_project)

    p = sub.add_parser("reconstruct", help="run the full reconstruction pipeline")
    p.add_argument("projections", help="projection JSON file")
    p.add_argument("--distinct-count", type=int, required=True,
                   help="known number of distinct rows in the original dataset")
    p.add_argument("--weight-mode", choices=["reciprocal", "ratio"], default="reciprocal")
    p.add_argument("--truth", help="CSV of the true dataset, for evaluation")
    p.add_argument("--truth-columns", help="column subset for the truth CSV")
    p.add_argument("--no-header", action="store_true", help="truth CSV has no header row")
    p.add_argument("--candidate-cap", type=int, default=DEFAULT_CANDIDATE_CAP)
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(fn=_cmd_reconstruct)

    p = sub.add_parser("simulate", help="Monte Carlo trials on random datasets")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--interval", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default: ${SEED_ENV_VAR} or 0)")
    p.add_argument("--stage", choices=list(STAGES), default="tuples_plus_likelihood")
    p.add_argument("--weight-mode", choices=["reciprocal", "ratio"], default="reciprocal")
    p.add_argument("--candidate-cap", type=int, default=DEFAULT_CANDIDATE_CAP)
    p.add_argument("--threads", type=int, default=1, help="worker process count")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("embed", help="render a 2-D SVG scatter of a report")
    p.add_argument("report")
    p.add_argument("--method", choices=["pca", "mds"], default="pca")
    p.add_argument("--color", choices=["likelihood", "accuracy"], default="likelihood")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("oracle", help="exhaustive cover enumeration for a report")
    p.add_argument("report")
    p.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP,
                   help="refuse if C(undeduced, slots) exceeds this")
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(fn=_cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ReconstructionError as exc:
        stage = getattr(exc, "stage", None)
        prefix = f"error [{stage}]" if stage else "error"
        print(f"{prefix}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
