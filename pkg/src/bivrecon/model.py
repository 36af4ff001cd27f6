"""Core data types: datasets, their pairwise projections, and validation.

A dataset is an ordered list of columns and a list of rows of discrete value
tokens.  Tokens are opaque strings; columns whose tokens all parse as decimal
numbers are ordered numerically, everything else bytewise.  The projection
set ties one multiset of coordinate pairs to every unordered column pair and
is the sole input to reconstruction.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InvalidDataset

Token = str
Row = tuple[Token, ...]
PairKey = tuple[int, int]
# ((i, v_i), (j, v_j)) with i < j; the unit of projection information.
Edge = tuple[tuple[int, Token], tuple[int, Token]]


def _numeric(token: Token) -> Optional[float]:
    try:
        x = float(token)
    except ValueError:
        return None
    return None if math.isnan(x) else x


def token_sort_key(domain: Iterable[Token]):
    """Sort key for one column's tokens: numeric when every token parses as a
    decimal number (string tie-break), bytewise otherwise."""
    toks = list(domain)
    if toks and all(_numeric(t) is not None for t in toks):
        return lambda t: (0, _numeric(t), t)
    return lambda t: (1, t)


def column_is_numeric(domain: Iterable[Token]) -> bool:
    toks = list(domain)
    return bool(toks) and all(_numeric(t) is not None for t in toks)


def row_sort_key(domains: Sequence[Iterable[Token]]):
    """Columnwise lexicographic key over per-column token order."""
    keys = [token_sort_key(d) for d in domains]
    return lambda row: tuple(k(t) for k, t in zip(keys, row))


@dataclass(frozen=True)
class Dataset:
    """Ground-truth table: column names plus rows of value tokens.

    Row order carries no meaning; duplicate rows are preserved.  ``intervals``
    optionally records the number of possible values per column when known
    (e.g. for generated data).
    """

    columns: tuple[str, ...]
    rows: tuple[Row, ...]
    intervals: Optional[tuple[int, ...]] = None

    @property
    def dimension(self) -> int:
        return len(self.columns)

    @property
    def n(self) -> int:
        return len(self.rows)

    def validate(self) -> None:
        d = self.dimension
        if d < 2:
            raise InvalidDataset(f"dimension must be >= 2, got {d}")
        for k, row in enumerate(self.rows):
            if len(row) != d:
                raise InvalidDataset(f"row {k} has {len(row)} entries, expected {d}")
        if self.intervals is not None and len(self.intervals) != d:
            raise InvalidDataset("intervals length does not match dimension")

    def domains(self) -> tuple[tuple[Token, ...], ...]:
        """Observed tokens per column, in column token order."""
        out = []
        for i in range(self.dimension):
            seen = {row[i] for row in self.rows}
            out.append(tuple(sorted(seen, key=token_sort_key(seen))))
        return tuple(out)


@dataclass(frozen=True)
class ProjectionSet:
    """Every unordered column pair's coordinate-pair multiset.

    ``pairs[(i, j)]`` maps ``(v_i, v_j)`` to its multiplicity; ``domains[i]``
    is the set of tokens observed in column i.  Instances are treated as
    immutable after construction.
    """

    dimension: int
    columns: tuple[str, ...]
    pairs: Mapping[PairKey, Mapping[tuple[Token, Token], int]]
    domains: tuple[frozenset[Token], ...]

    @property
    def n(self) -> int:
        """Total row count, inferable as any pair-projection's total."""
        first = min(self.pairs)
        return sum(self.pairs[first].values())

    def marginal(self, column: int, other: int) -> Counter:
        """Per-token counts for ``column`` read off its pair with ``other``."""
        i, j = (column, other) if column < other else (other, column)
        out: Counter = Counter()
        for (vi, vj), mult in self.pairs[(i, j)].items():
            out[vi if column == i else vj] += mult
        return out

    def edges(self) -> dict[Edge, int]:
        """Flatten the pair maps into ((i, v_i), (j, v_j)) -> multiplicity."""
        out: dict[Edge, int] = {}
        for (i, j), points in self.pairs.items():
            for (vi, vj), mult in points.items():
                out[((i, vi), (j, vj))] = mult
        return out

    def sorted_domains(self) -> tuple[tuple[Token, ...], ...]:
        return tuple(
            tuple(sorted(dom, key=token_sort_key(dom))) for dom in self.domains
        )


def project(dataset: Dataset) -> ProjectionSet:
    """Expand every row into its C(D,2) coordinate pairs.

    Row-order invariant; duplicate rows sum into pair multiplicities.
    """
    dataset.validate()
    if dataset.n < 1:
        raise InvalidDataset("cannot project an empty dataset")
    d = dataset.dimension
    pairs: dict[PairKey, Counter] = {key: Counter() for key in combinations(range(d), 2)}
    for row in dataset.rows:
        for i, j in combinations(range(d), 2):
            pairs[(i, j)][(row[i], row[j])] += 1
    domains = tuple(frozenset(row[i] for row in dataset.rows) for i in range(d))
    return ProjectionSet(
        dimension=d,
        columns=dataset.columns,
        pairs={key: dict(cnt) for key, cnt in pairs.items()},
        domains=domains,
    )


def distinct_rows(dataset: Dataset) -> dict[Row, int]:
    """Distinct rows with multiplicities; multiplicities sum to n."""
    dataset.validate()
    return dict(Counter(dataset.rows))


def validate_projections(proj: ProjectionSet) -> list[str]:
    """Check projection-set invariants; returns violations (empty = ok).

    Violations are data, not failures: each string names the pair, column, or
    token involved so externally supplied files can be diagnosed.
    """
    violations: list[str] = []
    d = proj.dimension
    if d < 2:
        return [f"dimension must be >= 2, got {d}"]
    expected_pairs = set(combinations(range(d), 2))
    got_pairs = set(proj.pairs)
    for missing in sorted(expected_pairs - got_pairs):
        violations.append(f"missing pair projection {missing}")
    for extra in sorted(got_pairs - expected_pairs):
        violations.append(f"unexpected pair projection {extra}")
    if violations:
        return violations

    totals = {key: sum(points.values()) for key, points in proj.pairs.items()}
    n = totals[min(totals)]
    for key in sorted(totals):
        if totals[key] != n:
            violations.append(
                f"pair-total mismatch: pair {key} totals {totals[key]}, expected {n}"
            )
    for key, points in sorted(proj.pairs.items()):
        for pt, mult in points.items():
            if mult < 1:
                violations.append(f"pair {key} point {pt} has multiplicity {mult} < 1")

    # Marginal consistency: each (column, token) count must agree across every
    # pair projection that involves the column.
    for i in range(d):
        reference: Optional[Counter] = None
        for j in range(d):
            if j == i:
                continue
            marg = proj.marginal(i, j)
            if reference is None:
                reference = marg
                continue
            for tok in sorted(set(reference) | set(marg), key=token_sort_key(set(reference) | set(marg))):
                if reference[tok] != marg[tok]:
                    violations.append(
                        f"marginal inconsistency at column {i}, token {tok!r}: "
                        f"count {reference[tok]} vs pair with column {j} count {marg[tok]}"
                    )
        if reference is not None:
            observed = set(reference)
            declared = set(proj.domains[i])
            for tok in sorted(observed ^ declared):
                side = "missing from" if tok in observed else "absent in pairs but listed in"
                violations.append(f"domain of column {i}: token {tok!r} {side} domain")
    return violations
