"""Likelihood scoring for undeduced candidates and slot-limited selection.

Every edge whose projection multiplicity is not fully accounted for by the
deduced rows yields a statement "at least x of these undeduced candidates are
correct".  Adding 1/|S| (or x/|S|) per statement to each member approximates
the candidate's appearance frequency among all feasible size-s covers, which
an exponential oracle can compute exactly on small instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Literal, Optional, Sequence, Union

from .deduction import DeductionResult
from .errors import InconsistentInstance, InfeasibleStatements, OracleTooLarge
from .graph import CandidateSet
from .model import Edge, ProjectionSet, token_sort_key

WeightMode = Literal["reciprocal", "ratio"]
Score = Union[Fraction, float]

# Past this many statements, exact rational running totals stop being worth
# it and scores fall back to doubles.
EXACT_SCORE_LIMIT = 10_000

DEFAULT_ORACLE_CAP = 10_000_000


@dataclass(frozen=True)
class EdgeStatement:
    """At least ``required`` of the candidates in ``members`` are original."""

    edge: Edge
    required: int
    members: tuple[int, ...]


@dataclass
class ScoredCandidates:
    """Running-total scores per undeduced candidate.

    Candidates appearing in no statement score 0.  Scores are exact rationals
    when few enough statements were accumulated, else floats; they carry only
    relative meaning.
    """

    scores: dict[int, Score]
    mode: WeightMode
    universe: tuple[int, ...]
    exact: bool

    def score(self, index: int) -> Score:
        zero = Fraction(0) if self.exact else 0.0
        return self.scores.get(index, zero)


@dataclass(frozen=True)
class TieReport:
    """Describes a score tie spanning the selection boundary."""

    boundary_score: Score
    tied: int
    chosen_among_tied: int


@dataclass
class Selection:
    """The chosen candidate indices for the available slots."""

    chosen: tuple[int, ...]
    slots: int
    requested: int
    tie: Optional[TieReport] = None


def _edge_sort_key(proj: ProjectionSet):
    keys = [token_sort_key(dom) for dom in proj.domains]

    def key(edge: Edge):
        (i, vi), (j, vj) = edge
        return (i, j, keys[i](vi), keys[j](vj))

    return key


def build_statements(
    proj: ProjectionSet, cands: CandidateSet, ded: DeductionResult
) -> list[EdgeStatement]:
    """One statement per edge with a positive remaining requirement.

    The remaining requirement is the projection multiplicity minus the count
    of deduced candidates containing the edge, floored at 0 and capped at the
    number of undeduced carriers: multiplicity beyond the distinct carriers
    can only come from duplicated rows, which distinct-row candidates cannot
    resolve.  An edge no candidate accounts for at all cannot be satisfied by
    any set of rows and raises InconsistentInstance.
    """
    undeduced_set = {k for k in range(len(cands)) if k not in ded.deduced}
    members_of = cands.edge_members
    statements = []
    edges = proj.edges()
    for edge in sorted(edges, key=_edge_sort_key(proj)):
        coverage = ded.edge_coverage.get(edge, 0)
        required = max(0, edges[edge] - coverage)
        if required == 0:
            continue
        members = tuple(
            k for k in members_of.get(edge, ()) if k in undeduced_set
        )
        if not members and coverage == 0:
            raise InconsistentInstance(
                f"edge {edge} appears in the projections but in no candidate"
            )
        required = min(required, len(members))
        if required == 0:
            continue
        statements.append(EdgeStatement(edge=edge, required=required, members=members))
    return statements


def score_candidates(
    stmts: Sequence[EdgeStatement],
    mode: WeightMode = "reciprocal",
    universe: Optional[Iterable[int]] = None,
) -> ScoredCandidates:
    """Accumulate 1/|S| (reciprocal) or x/|S| (ratio) per statement member."""
    exact = len(stmts) <= EXACT_SCORE_LIMIT
    scores: dict[int, Score] = {}
    for st in stmts:
        c = len(st.members)
        numer = 1 if mode == "reciprocal" else st.required
        w: Score = Fraction(numer, c) if exact else numer / c
        for k in st.members:
            scores[k] = scores.get(k, Fraction(0) if exact else 0.0) + w
    if universe is None:
        uni = sorted({k for st in stmts for k in st.members})
    else:
        uni = sorted(universe)
    return ScoredCandidates(scores=scores, mode=mode, universe=tuple(uni), exact=exact)


def select_rows(scores: ScoredCandidates, s: int) -> Selection:
    """Take the top-s candidates by score.

    Boundary ties break lexicographically, which is index order since the
    candidate list is sorted; a tie spanning the boundary is reported, not
    hidden.  An s larger than the universe is clamped.
    """
    if s < 0:
        raise ValueError("slot count must be >= 0")
    requested = s
    universe = scores.universe
    slots = min(s, len(universe))
    ranked = sorted(universe, key=lambda k: (-scores.score(k), k))
    chosen = tuple(sorted(ranked[:slots]))
    tie = None
    if 0 < slots < len(ranked):
        boundary = scores.score(ranked[slots - 1])
        if scores.score(ranked[slots]) == boundary:
            at_boundary = [k for k in universe if scores.score(k) == boundary]
            chosen_at = [k for k in ranked[:slots] if scores.score(k) == boundary]
            tie = TieReport(
                boundary_score=boundary,
                tied=len(at_boundary),
                chosen_among_tied=len(chosen_at),
            )
    return Selection(chosen=chosen, slots=slots, requested=requested, tie=tie)


def exact_cover_frequencies(
    stmts: Sequence[EdgeStatement],
    universe: Iterable[int],
    s: int,
    cap: int = DEFAULT_ORACLE_CAP,
) -> tuple[int, dict[int, Fraction]]:
    """Enumerate every size-s subset satisfying all statements.

    Returns the solution count and, per candidate, the proportion of
    solutions containing it.  Refuses instances whose C(|universe|, s)
    exceeds ``cap``; raises InfeasibleStatements when nothing satisfies.
    """
    uni = sorted(universe)
    u = len(uni)
    if s > u:
        raise InfeasibleStatements(f"cannot choose {s} of {u} candidates")
    total = math.comb(u, s)
    if total > cap:
        raise OracleTooLarge(
            f"C({u},{s}) = {total} subsets exceeds the cap of {cap}"
        )
    bit_of = {k: 1 << p for p, k in enumerate(uni)}
    checks = []
    for st in stmts:
        mask = 0
        for k in st.members:
            if k in bit_of:
                mask |= bit_of[k]
        checks.append((mask, st.required))

    count = 0
    appearances = {k: 0 for k in uni}
    for combo in combinations(uni, s):
        t_mask = 0
        for k in combo:
            t_mask |= bit_of[k]
        ok = True
        for mask, required in checks:
            if bin(t_mask & mask).count("1") < required:
                ok = False
                break
        if ok:
            count += 1
            for k in combo:
                appearances[k] += 1
    if count == 0:
        raise InfeasibleStatements("no size-s subset satisfies every statement")
    return count, {k: Fraction(appearances[k], count) for k in uni}
