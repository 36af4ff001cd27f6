"""D-partite graph over (column, token) vertices and D-clique enumeration.

Every token of every column becomes a vertex; every coordinate pair becomes a
cross-column edge.  A clique taking one vertex per part is a candidate row:
the set of all such cliques is guaranteed to contain every true distinct row,
possibly alongside phantoms assembled from pairs of unrelated rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Optional

from .errors import CandidateExplosion, InvalidProjections
from .model import Edge, ProjectionSet, Row, Token, row_sort_key, validate_projections

DEFAULT_CANDIDATE_CAP = 10_000_000


@dataclass(frozen=True)
class ReconstructionGraph:
    """Vertices per column plus cross-column edges with multiplicities.

    One vertex per distinct (column, token); an edge's multiplicity is its
    coordinate pair's count in the projection.  No edge ever joins two
    vertices of the same column.
    """

    dimension: int
    columns: tuple[str, ...]
    parts: tuple[tuple[Token, ...], ...]
    edges: dict[Edge, int]

    @property
    def vertex_count(self) -> int:
        return sum(len(p) for p in self.parts)

    def has_edge(self, i: int, vi: Token, j: int, vj: Token) -> bool:
        if i > j:
            i, j, vi, vj = j, i, vj, vi
        return ((i, vi), (j, vj)) in self.edges


def build_graph(proj: ProjectionSet) -> ReconstructionGraph:
    """Mirror a validated projection set as a D-partite graph."""
    violations = validate_projections(proj)
    if violations:
        raise InvalidProjections(violations)
    return ReconstructionGraph(
        dimension=proj.dimension,
        columns=proj.columns,
        parts=proj.sorted_domains(),
        edges=proj.edges(),
    )


@dataclass
class CandidateSet:
    """All D-cliques of the graph, lexicographically sorted.

    ``vertex_members`` and ``edge_members`` are exact inverted indexes of the
    candidate list (built lazily): which candidates contain a given vertex or
    coordinate pair.  They realize the multigraph of cliques in which one
    underlying edge may appear in several candidates.
    """

    candidates: tuple[Row, ...]
    graph: Optional[ReconstructionGraph] = None

    def __len__(self) -> int:
        return len(self.candidates)

    def index_of(self, row: Row) -> Optional[int]:
        return self._position.get(row)

    @cached_property
    def _position(self) -> dict[Row, int]:
        return {row: k for k, row in enumerate(self.candidates)}

    @cached_property
    def vertex_members(self) -> dict[tuple[int, Token], tuple[int, ...]]:
        acc: dict[tuple[int, Token], list[int]] = {}
        for k, row in enumerate(self.candidates):
            for i, tok in enumerate(row):
                acc.setdefault((i, tok), []).append(k)
        return {v: tuple(ks) for v, ks in acc.items()}

    @cached_property
    def edge_members(self) -> dict[Edge, tuple[int, ...]]:
        acc: dict[Edge, list[int]] = {}
        for k, row in enumerate(self.candidates):
            for i, j in combinations(range(len(row)), 2):
                acc.setdefault(((i, row[i]), (j, row[j])), []).append(k)
        return {e: tuple(ks) for e, ks in acc.items()}


def enumerate_candidates(
    graph: ReconstructionGraph, cap: int = DEFAULT_CANDIDATE_CAP
) -> CandidateSet:
    """List every D-clique (one vertex per part) of the graph.

    Cliques of size D must take exactly one vertex per part, so the search is
    ordered backtracking over parts instead of a general clique algorithm:
    parts are visited in ascending domain-size order, and the vertices still
    compatible with the partial assignment are tracked per later part as
    bitmasks, intersected on every extension.  Edge multiplicities are
    ignored here; a pair present twice is still one edge.

    Raises CandidateExplosion when more than ``cap`` cliques exist.
    """
    d = graph.dimension
    order = sorted(range(d), key=lambda i: (len(graph.parts[i]), i))
    sizes = [len(graph.parts[c]) for c in order]
    if min(sizes) == 0:
        return CandidateSet(candidates=(), graph=graph)

    # adj[a][b][v]: bitmask over part order[b]'s vertices adjacent to vertex v
    # of part order[a], for a < b in visit order.
    index_in_part = [
        {tok: k for k, tok in enumerate(graph.parts[c])} for c in range(d)
    ]
    adj = [[None] * d for _ in range(d)]
    for a in range(d):
        for b in range(a + 1, d):
            adj[a][b] = [0] * sizes[a]
    pos_of = {c: a for a, c in enumerate(order)}
    for ((i, vi), (j, vj)) in graph.edges:
        a, b = pos_of[i], pos_of[j]
        ka = index_in_part[i][vi]
        kb = index_in_part[j][vj]
        if a > b:
            a, b, ka, kb = b, a, kb, ka
        adj[a][b][ka] |= 1 << kb

    found: list[tuple[int, ...]] = []
    full_masks = [(1 << s) - 1 for s in sizes]
    chosen = [0] * d

    def extend(level: int, masks: list[int]) -> None:
        if level == d:
            found.append(tuple(chosen))
            if len(found) > cap:
                raise CandidateExplosion(cap, len(found))
            return
        avail = masks[level]
        level_adj = adj[level]
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail ^= low
            chosen[level] = v
            if level == d - 1:
                extend(level + 1, masks)
                continue
            nxt = list(masks)
            ok = True
            for m in range(level + 1, d):
                nxt[m] = masks[m] & level_adj[m][v]
                if not nxt[m]:
                    ok = False
                    break
            if ok:
                extend(level + 1, nxt)

    extend(0, full_masks)

    rows = []
    for assign in found:
        row = [None] * d
        for level, v in enumerate(assign):
            col = order[level]
            row[col] = graph.parts[col][v]
        rows.append(tuple(row))
    rows.sort(key=row_sort_key(graph.parts))
    return CandidateSet(candidates=tuple(rows), graph=graph)
