"""Exact deduction over the candidate set.

Two rules, both sound even when the original data held duplicate rows:

* Singles: a token unique in its column pins its row.  The rule is applied
  to a fixed point: once rows are deduced, a token with exactly one
  remaining carrier among the undeduced candidates is again "unique" and
  pins that carrier, provided a lower bound on the token's distinct-row
  count certifies that exactly one true row is still missing.  The lower
  bound is the token's largest distinct-partner count across the other
  columns, which never overcounts duplicated rows the way the raw marginal
  multiplicity would.
* Doubles: one pass; a coordinate pair contained in exactly one candidate
  pins that candidate.

Doubles subsumes singles: whenever the singles fixed point pins a row, some
column separates that token's true rows, so each of them also carries a
unique pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import CandidateSet
from .model import Edge


@dataclass
class DeductionResult:
    """Deduced candidate indices, the rule that fired for each, and how much
    of each graph edge's multiplicity the deduced rows account for.

    Each deduced candidate accounts exactly once per edge it contains, even
    if the underlying row was duplicated in the original data: duplicate
    multiplicities are unresolvable from distinct-row candidates.
    """

    deduced: frozenset[int]
    rule: dict[int, str]  # index -> "single" | "double"
    edge_coverage: dict[Edge, int]

    def __len__(self) -> int:
        return len(self.deduced)


def _coverage(cands: CandidateSet, deduced: frozenset[int]) -> dict[Edge, int]:
    cover: dict[Edge, int] = {}
    for k in deduced:
        row = cands.candidates[k]
        for i, j in combinations(range(len(row)), 2):
            e = ((i, row[i]), (j, row[j]))
            cover[e] = cover.get(e, 0) + 1
    return cover


def _distinct_row_lower_bounds(cands: CandidateSet) -> dict[tuple[int, str], int]:
    """Per vertex, a lower bound on how many distinct true rows contain it:
    its largest distinct-partner count over the other columns.  Two partners
    in one column can only come from two different rows."""
    graph = cands.graph
    partners: dict[tuple[tuple[int, str], int], set] = {}
    for ((i, vi), (j, vj)) in graph.edges:
        partners.setdefault(((i, vi), j), set()).add(vj)
        partners.setdefault(((j, vj), i), set()).add(vi)
    bounds: dict[tuple[int, str], int] = {}
    for c in range(graph.dimension):
        for tok in graph.parts[c]:
            v = (c, tok)
            bounds[v] = max(
                len(partners.get((v, j), ())) for j in range(graph.dimension) if j != c
            )
    return bounds


def deduce_singles(cands: CandidateSet) -> DeductionResult:
    """Fixed point of the unique-token rule.

    A vertex with a single undeduced carrier pins it when deduction already
    accounts for all but one of the vertex's certain distinct rows.  Without
    a graph (synthetic candidate sets) only the first round can fire, i.e.
    vertices contained in exactly one candidate.
    """
    members_of = cands.vertex_members
    deduced: set[int] = set()
    if cands.graph is None:
        for members in members_of.values():
            if len(members) == 1:
                deduced.add(members[0])
    else:
        bounds = _distinct_row_lower_bounds(cands)
        changed = True
        while changed:
            changed = False
            for v, members in members_of.items():
                pending = [k for k in members if k not in deduced]
                if len(pending) != 1:
                    continue
                covered = len(members) - 1
                if bounds[v] - covered == 1:
                    deduced.add(pending[0])
                    changed = True
    frozen = frozenset(deduced)
    return DeductionResult(
        deduced=frozen,
        rule={k: "single" for k in sorted(frozen)},
        edge_coverage=_coverage(cands, frozen),
    )


def deduce_doubles(cands: CandidateSet) -> DeductionResult:
    """Deduce every candidate containing an edge present in no other
    candidate; a superset of the singles fixed point.

    Attribution prefers "single" where a unique vertex already fired, else
    "double".
    """
    singles = set()
    for members in cands.vertex_members.values():
        if len(members) == 1:
            singles.add(members[0])
    hit = set(singles)
    for members in cands.edge_members.values():
        if len(members) == 1:
            hit.add(members[0])
    deduced = frozenset(hit)
    rule = {k: ("single" if k in singles else "double") for k in sorted(deduced)}
    return DeductionResult(
        deduced=deduced,
        rule=rule,
        edge_coverage=_coverage(cands, deduced),
    )
