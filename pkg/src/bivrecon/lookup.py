"""Reconstruction anchored on a column with no duplicate values.

When some column's values are all distinct, each of its tokens appears in
exactly one coordinate pair per projection involving that column, so the full
row for each token can be read off directly.  Closed-form probabilities for a
random column being duplicate-free are provided in two variants: the
``as_published`` binomial form and a ``corrected`` falling-factorial form
that matches exhaustive enumeration (the binomial form undercounts ordered
duplicate-free sequences by a factor of N!).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

from .model import ProjectionSet, Row, Token, token_sort_key

Mode = Literal["as_published", "corrected"]

# Above this many uniform draws, exact big-integer rationals get slow; switch
# to log-space floats.
_EXACT_LIMIT = 5_000


@dataclass(frozen=True)
class LookupOutcome:
    """Either the fully reconstructed rows with their anchor column, or
    infeasible when every column has a duplicate value."""

    status: Literal["reconstructed", "infeasible"]
    anchor: Optional[int] = None
    rows: tuple[Row, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.status == "reconstructed"


def lookup_reconstruct(proj: ProjectionSet) -> LookupOutcome:
    """Rebuild the dataset from an all-distinct column, if one exists.

    The lowest-index qualifying column is the anchor.  Infeasibility is an
    outcome, not an error.
    """
    d = proj.dimension
    n = proj.n
    anchor = None
    for i in range(d):
        other = 0 if i else 1
        marg = proj.marginal(i, other)
        if len(marg) == n and all(c == 1 for c in marg.values()):
            anchor = i
            break
    if anchor is None:
        return LookupOutcome(status="infeasible")

    partners: dict[Token, list[Optional[Token]]] = {}
    other_cols = [j for j in range(d) if j != anchor]
    for j in other_cols:
        lo, hi = (anchor, j) if anchor < j else (j, anchor)
        for (vl, vh), _mult in proj.pairs[(lo, hi)].items():
            va, vj = (vl, vh) if anchor == lo else (vh, vl)
            partners.setdefault(va, [None] * d)[j] = vj
    rows = []
    anchor_tokens = sorted(partners, key=token_sort_key(partners))
    for va in anchor_tokens:
        row = partners[va]
        row[anchor] = va
        rows.append(tuple(row))
    return LookupOutcome(status="reconstructed", anchor=anchor, rows=tuple(rows))


def column_distinct_probability(interval: int, n: int, mode: Mode = "corrected") -> float:
    """Probability that n iid uniform draws over ``interval`` values have no
    duplicates.

    ``as_published`` evaluates C(I, N) / I**N; ``corrected`` evaluates
    I! / ((I-N)! * I**N), the count of duplicate-free ordered sequences over
    all ordered sequences.  Both are 0 when N > I (pigeonhole).
    """
    if interval < 1 or n < 1:
        raise ValueError("interval and n must be >= 1")
    if n > interval:
        return 0.0
    if n <= _EXACT_LIMIT:
        numer = math.comb(interval, n) if mode == "as_published" else math.perm(interval, n)
        return float(Fraction(numer, interval**n))
    log_numer = math.lgamma(interval + 1) - math.lgamma(interval - n + 1)
    if mode == "as_published":
        log_numer -= math.lgamma(n + 1)
    return math.exp(log_numer - n * math.log(interval))


def lookup_failure_probability(
    intervals: Sequence[int], n: int, mode: Mode = "corrected"
) -> float:
    """Probability every column of a random dataset has a duplicate, i.e.
    the product over columns of (1 - per-column distinct probability)."""
    out = 1.0
    for interval in intervals:
        out *= 1.0 - column_distinct_probability(interval, n, mode)
    return out
