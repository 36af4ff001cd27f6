"""Confusion labeling against ground truth and recovery metrics.

Only meaningful in evaluation mode, when the true distinct rows are known.
Truth matching is exact equality on distinct rows; duplicate multiplicities
in the truth are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet

from .deduction import DeductionResult
from .errors import InvalidSelection
from .graph import CandidateSet
from .likelihood import Selection
from .model import Row

DEDUCED = "deduced"
TRUE_POSITIVE = "true_positive"
FALSE_POSITIVE = "false_positive"
FALSE_NEGATIVE = "false_negative"
TRUE_NEGATIVE = "true_negative"

LABELS = (DEDUCED, TRUE_POSITIVE, FALSE_POSITIVE, FALSE_NEGATIVE, TRUE_NEGATIVE)


@dataclass(frozen=True)
class ReconstructionMetrics:
    """Headline numbers for one reconstruction run."""

    truth_count: int
    candidate_count: int
    deduced_count: int
    slots: int
    actual_selected_correct: int
    proportion_recovered: float
    expected_random: float
    full_recovery: bool


def classify(
    cands: CandidateSet,
    ded: DeductionResult,
    sel: Selection,
    truth: AbstractSet[Row],
) -> list[str]:
    """Label every candidate: deduced, TP/FP among the selection, FN/TN among
    the unselected undeduced."""
    chosen = set(sel.chosen)
    overlap = chosen & ded.deduced
    if overlap:
        raise InvalidSelection(
            f"selection overlaps deduced candidates: {sorted(overlap)}"
        )
    labels = []
    for k, row in enumerate(cands.candidates):
        if k in ded.deduced:
            labels.append(DEDUCED)
        elif k in chosen:
            labels.append(TRUE_POSITIVE if row in truth else FALSE_POSITIVE)
        else:
            labels.append(FALSE_NEGATIVE if row in truth else TRUE_NEGATIVE)
    return labels


def compute_metrics(
    cands: CandidateSet,
    ded: DeductionResult,
    sel: Selection,
    truth: AbstractSet[Row],
) -> ReconstructionMetrics:
    """Recovery proportion plus the random-guessing baseline.

    ``expected_random`` is what filling the s slots uniformly at random from
    the undeduced candidates would recover on average, deduced rows included.
    """
    truth_count = len(truth)
    labels = classify(cands, ded, sel, truth)
    deduced_correct = sum(
        1 for k in ded.deduced if cands.candidates[k] in truth
    )
    tp = labels.count(TRUE_POSITIVE)
    s = sel.slots
    undeduced = len(cands) - len(ded.deduced)
    true_undeduced = sum(
        1
        for k, row in enumerate(cands.candidates)
        if k not in ded.deduced and row in truth
    )
    recovered = Fraction(deduced_correct + tp, truth_count)
    if s > 0:
        expected = Fraction(len(ded.deduced), 1) + Fraction(s * true_undeduced, undeduced)
    else:
        expected = Fraction(len(ded.deduced), 1)
    return ReconstructionMetrics(
        truth_count=truth_count,
        candidate_count=len(cands),
        deduced_count=len(ded.deduced),
        slots=s,
        actual_selected_correct=tp,
        proportion_recovered=float(recovered),
        expected_random=float(expected / truth_count),
        full_recovery=(deduced_correct + tp) == truth_count,
    )
