from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from bivrecon.deduction import deduce_doubles
from bivrecon.errors import InconsistentInstance, InfeasibleStatements, OracleTooLarge
from bivrecon.graph import build_graph, enumerate_candidates
from bivrecon.likelihood import (
    EdgeStatement,
    build_statements,
    exact_cover_frequencies,
    score_candidates,
    select_rows,
)
from bivrecon.model import Dataset, ProjectionSet, project


def test_worked_example_scores(worked_statements):
    sc = score_candidates(worked_statements, universe=range(8))
    A, B, D, E, F, G, H = 0, 1, 3, 4, 5, 6, 7
    assert sc.score(H) == Fraction(5, 6)
    assert sc.score(F) == Fraction(2, 3)
    assert sc.score(D) == Fraction(1, 2)
    assert sc.score(A) == sc.score(E) == sc.score(G) == Fraction(1, 3)
    assert sc.score(B) == 0


def test_worked_example_selection(worked_statements):
    sc = score_candidates(worked_statements, universe=range(8))
    sel = select_rows(sc, 3)
    assert set(sel.chosen) == {3, 5, 7}  # D, F, H
    assert sel.tie is None


def test_worked_example_oracle(worked_statements):
    count, props = exact_cover_frequencies(worked_statements, range(8), 3)
    assert count == 22
    assert props[7] == Fraction(15, 22)
    assert props[5] == Fraction(11, 22)
    assert props[3] == Fraction(10, 22)


def test_oracle_ranking_matches_scores(worked_statements):
    sc = score_candidates(worked_statements, universe=range(8))
    _count, props = exact_cover_frequencies(worked_statements, range(8), 3)
    top_scores = sorted(range(8), key=lambda k: (-sc.score(k), k))[:3]
    top_props = sorted(range(8), key=lambda k: (-props[k], k))[:3]
    assert top_scores == top_props == [7, 5, 3]


def test_ratio_mode_weights():
    stmts = [EdgeStatement(edge=((0, "a"), (1, "b")), required=2, members=(0, 1, 2))]
    sc = score_candidates(stmts, mode="ratio", universe=range(3))
    assert sc.score(0) == Fraction(2, 3)


def parity_pipeline(ds):
    proj = project(ds)
    cands = enumerate_candidates(build_graph(proj))
    ded = deduce_doubles(cands)
    return proj, cands, ded


def test_parity_statements(even_parity):
    proj, cands, ded = parity_pipeline(even_parity)
    stmts = build_statements(proj, cands, ded)
    assert len(stmts) == 12
    assert all(st.required == 1 for st in stmts)
    assert all(len(st.members) == 2 for st in stmts)
    sc = score_candidates(stmts, universe=range(8))
    assert all(sc.score(k) == Fraction(3, 2) for k in range(8))
    sel = select_rows(sc, 4)
    assert sel.chosen == (0, 1, 2, 3)
    assert sel.tie is not None and sel.tie.tied == 8 and sel.tie.chosen_among_tied == 4


def test_parity_oracle_against_subset_bruteforce(even_parity):
    proj, cands, ded = parity_pipeline(even_parity)
    stmts = build_statements(proj, cands, ded)
    count, props = exact_cover_frequencies(stmts, range(8), 4)
    wanted = []
    for combo in combinations(range(8), 4):
        team = set(combo)
        if all(team & set(st.members) for st in stmts):
            wanted.append(team)
    assert count == len(wanted)
    for k in range(8):
        appearances = sum(1 for team in wanted if k in team)
        assert props[k] == Fraction(appearances, count)


def test_all_edges_covered_gives_no_statements(three_rows):
    proj, cands, ded = parity_pipeline(three_rows)
    assert build_statements(proj, cands, ded) == []


def test_duplicate_multiplicity_absorbed():
    ds = Dataset(columns=("a", "b"), rows=(("0", "0"), ("0", "0")))
    proj, cands, ded = parity_pipeline(ds)
    assert ded.deduced == {0}
    assert build_statements(proj, cands, ded) == []


def test_uncoverable_edge_is_inconsistent():
    # valid marginals, but no clique passes through any edge
    proj = ProjectionSet(
        dimension=3,
        columns=("a", "b", "c"),
        pairs={
            (0, 1): {("0", "0"): 1, ("1", "1"): 1},
            (0, 2): {("0", "0"): 1, ("1", "1"): 1},
            (1, 2): {("0", "1"): 1, ("1", "0"): 1},
        },
        domains=(frozenset({"0", "1"}),) * 3,
    )
    cands = enumerate_candidates(build_graph(proj))
    assert len(cands) == 0
    ded = deduce_doubles(cands)
    with pytest.raises(InconsistentInstance):
        build_statements(proj, cands, ded)


def test_select_zero_slots(worked_statements):
    sc = score_candidates(worked_statements, universe=range(8))
    sel = select_rows(sc, 0)
    assert sel.chosen == ()


def test_select_clamps_oversized_request(worked_statements):
    sc = score_candidates(worked_statements, universe=range(8))
    sel = select_rows(sc, 12)
    assert sel.slots == 8
    assert sel.requested == 12
    assert sel.chosen == tuple(range(8))


def test_scores_rescaling_keeps_selection(worked_statements):
    sc = score_candidates(worked_statements, universe=range(8))
    sel = select_rows(sc, 3)
    sc.scores = {k: v * 7 for k, v in sc.scores.items()}
    assert select_rows(sc, 3).chosen == sel.chosen


def test_statement_order_does_not_matter(worked_statements):
    forward = score_candidates(worked_statements, universe=range(8))
    backward = score_candidates(list(reversed(worked_statements)), universe=range(8))
    assert forward.scores == backward.scores
    assert select_rows(forward, 3).chosen == select_rows(backward, 3).chosen


def test_score_additivity(worked_statements):
    base = score_candidates(worked_statements, universe=range(8))
    extra = EdgeStatement(edge=((0, "s"), (2, "s")), required=1, members=(1, 2))
    grown = score_candidates(worked_statements + [extra], universe=range(8))
    for k in range(8):
        delta = grown.score(k) - base.score(k)
        assert delta == (Fraction(1, 2) if k in (1, 2) else 0)


def test_oracle_unconstrained_uniform():
    count, props = exact_cover_frequencies([], range(4), 2)
    assert count == 6
    assert all(p == Fraction(1, 2) for p in props.values())


def test_oracle_cap():
    with pytest.raises(OracleTooLarge):
        exact_cover_frequencies([], range(40), 20, cap=1000)


def test_oracle_infeasible():
    stmts = [
        EdgeStatement(edge=((0, "a"), (1, "a")), required=1, members=(0,)),
        EdgeStatement(edge=((0, "b"), (1, "b")), required=1, members=(1,)),
        EdgeStatement(edge=((0, "c"), (1, "c")), required=1, members=(2,)),
    ]
    with pytest.raises(InfeasibleStatements):
        exact_cover_frequencies(stmts, range(3), 2)


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_statement_requirements_never_exceed_members(seed):
    import numpy as np

    rng = np.random.Generator(np.random.PCG64(seed))
    rows = tuple(
        tuple(str(int(v)) for v in rng.integers(0, 4, size=3)) for _ in range(8)
    )
    ds = Dataset(columns=("a", "b", "c"), rows=rows)
    proj, cands, ded = parity_pipeline(ds)
    for st_ in build_statements(proj, cands, ded):
        assert 1 <= st_.required <= len(st_.members)
        assert all(k not in ded.deduced for k in st_.members)
        if ded.edge_coverage.get(st_.edge, 0) == 0:
            # a lone carrier would have been deduced by its unique pair
            assert len(st_.members) >= 2
