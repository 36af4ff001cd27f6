"""Seeded random-dataset generation and the Monte Carlo experiment runner.

Each trial derives its own generator as PCG64 seeded by
``SeedSequence(master_seed, spawn_key=(trial_index,))``, so trials are
independent, reproducible, and identical regardless of worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .deduction import deduce_doubles, deduce_singles
from .errors import CandidateExplosion, InconsistentInstance
from .evaluation import compute_metrics
from .graph import DEFAULT_CANDIDATE_CAP, build_graph, enumerate_candidates
from .likelihood import build_statements, score_candidates, select_rows
from .model import Dataset, distinct_rows, project

RNG_DESCRIPTION = (
    "numpy PCG64; per-trial seed = SeedSequence(master_seed, spawn_key=(trial_index,))"
)

STAGES = ("cliques_only", "tuples", "tuples_plus_likelihood")


@dataclass(frozen=True)
class TrialConfig:
    """Parameters for one batch of random-reconstruction trials."""

    dimension: int
    n: int
    interval: Union[int, tuple[int, ...]]
    trials: int
    seed: int = 0
    stage: str = "tuples_plus_likelihood"
    weight_mode: str = "reciprocal"
    candidate_cap: int = DEFAULT_CANDIDATE_CAP

    def __post_init__(self):
        if self.dimension < 2 or self.n < 1 or self.trials < 1:
            raise ValueError("need dimension >= 2, n >= 1, trials >= 1")
        if any(i < 1 for i in self.intervals):
            raise ValueError("intervals must be >= 1")
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")

    @property
    def intervals(self) -> tuple[int, ...]:
        if isinstance(self.interval, int):
            return (self.interval,) * self.dimension
        return tuple(self.interval)


def generate_dataset(config: TrialConfig, trial_index: int) -> Dataset:
    """n rows of iid uniform integers over [0, I_d) per column, as tokens."""
    seq = np.random.SeedSequence(config.seed, spawn_key=(trial_index,))
    rng = np.random.Generator(np.random.PCG64(seq))
    cols = []
    for interval in config.intervals:
        cols.append(rng.integers(0, interval, size=config.n))
    rows = tuple(
        tuple(str(int(cols[d][r])) for d in range(config.dimension))
        for r in range(config.n)
    )
    names = tuple(f"c{d}" for d in range(config.dimension))
    return Dataset(columns=names, rows=rows, intervals=config.intervals)


def run_single_trial(config: TrialConfig, trial_index: int) -> dict:
    """Generate, project, enumerate, and (per stage) deduce and select.

    Returns a flat record of per-trial metrics, or an ``{"error": ...}``
    record when a stage refuses the instance.
    """
    dataset = generate_dataset(config, trial_index)
    truth = set(distinct_rows(dataset))
    truth_count = len(truth)
    proj = project(dataset)
    try:
        cands = enumerate_candidates(build_graph(proj), cap=config.candidate_cap)
    except CandidateExplosion as exc:
        return {"index": trial_index, "error": "candidate_explosion", "detail": str(exc)}
    record: dict = {
        "index": trial_index,
        "truth_distinct": truth_count,
        "candidates": len(cands),
        "clique_recovery": float(set(cands.candidates) == truth),
    }
    if config.stage == "cliques_only":
        return record

    singles = deduce_singles(cands)
    doubles = deduce_doubles(cands)
    deduced_correct = sum(1 for k in doubles.deduced if cands.candidates[k] in truth)
    record.update(
        {
            "singles_deduced": float(len(singles)),
            "doubles_deduced": float(len(doubles)),
            "tuples_recovery": float(
                {cands.candidates[k] for k in doubles.deduced} == truth
            ),
            "proportion_tuples": deduced_correct / truth_count,
        }
    )
    if config.stage == "tuples":
        return record

    try:
        stmts = build_statements(proj, cands, doubles)
    except InconsistentInstance as exc:
        return {"index": trial_index, "error": "inconsistent_instance", "detail": str(exc)}
    undeduced = [k for k in range(len(cands)) if k not in doubles.deduced]
    scores = score_candidates(stmts, mode=config.weight_mode, universe=undeduced)
    slots = truth_count - len(doubles.deduced)
    sel = select_rows(scores, slots)
    metrics = compute_metrics(cands, doubles, sel, truth)
    record.update(
        {
            "slots": float(metrics.slots),
            "selected_correct": float(metrics.actual_selected_correct),
            "proportion_selected": metrics.proportion_recovered,
            "expected_random": metrics.expected_random,
        }
    )
    return record


@dataclass
class AggregateReport:
    """Means and standard errors over the included trials, plus the per-trial
    records and the counts of trials excluded by stage errors."""

    config: TrialConfig
    rng: str
    trials_run: int
    excluded: dict[str, int]
    means: dict[str, float]
    se: dict[str, float]
    records: list[dict] = field(repr=False, default_factory=list)


def _mean_se(values: list[float]) -> tuple[float, float]:
    k = len(values)
    mean = math.fsum(values) / k
    if k < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (k - 1)
    return mean, math.sqrt(var) / math.sqrt(k)


def _worker(args: tuple[TrialConfig, int]) -> dict:
    return run_single_trial(*args)


def run_trials(config: TrialConfig, workers: int = 1) -> AggregateReport:
    """Run every trial and aggregate; bit-identical for a fixed config."""
    indices = range(config.trials)
    if workers > 1:
        chunk = max(1, config.trials // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(
                pool.map(_worker, [(config, i) for i in indices], chunksize=chunk)
            )
    else:
        records = [run_single_trial(config, i) for i in indices]

    excluded: dict[str, int] = {}
    included = []
    for rec in records:
        if "error" in rec:
            excluded[rec["error"]] = excluded.get(rec["error"], 0) + 1
        else:
            included.append(rec)

    metric_names = [k for k in (included[0] if included else {}) if k != "index"]
    means: dict[str, float] = {}
    se: dict[str, float] = {}
    for name in metric_names:
        mean, err = _mean_se([rec[name] for rec in included])
        means[name] = mean
        se[name] = err
    return AggregateReport(
        config=config,
        rng=RNG_DESCRIPTION,
        trials_run=len(included),
        excluded=excluded,
        means=means,
        se=se,
        records=records,
    )
