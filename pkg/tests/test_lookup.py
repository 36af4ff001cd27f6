from collections import Counter
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings

from bivrecon.deduction import deduce_singles
from bivrecon.graph import build_graph, enumerate_candidates
from bivrecon.lookup import (
    column_distinct_probability,
    lookup_failure_probability,
    lookup_reconstruct,
)
from bivrecon.model import Dataset, distinct_rows, project

from test_model import small_datasets


def test_reconstructs_from_distinct_column(three_rows):
    out = lookup_reconstruct(project(three_rows))
    assert out.status == "reconstructed"
    assert out.anchor == 0
    assert Counter(out.rows) == Counter(three_rows.rows)


def test_parity_is_infeasible(even_parity):
    assert lookup_reconstruct(project(even_parity)).status == "infeasible"


def test_anchor_prefers_lowest_index():
    ds = Dataset(columns=("a", "b"), rows=(("1", "5"), ("2", "6")))
    assert lookup_reconstruct(project(ds)).anchor == 0


def test_pigeonhole_gives_zero():
    assert column_distinct_probability(10, 12, "as_published") == 0.0
    assert column_distinct_probability(10, 12, "corrected") == 0.0
    assert lookup_failure_probability([10] * 6, 12, "corrected") == 1.0


def test_two_by_two_values():
    assert column_distinct_probability(2, 2, "as_published") == 0.25
    assert column_distinct_probability(2, 2, "corrected") == 0.5
    assert lookup_failure_probability((2, 2), 2, "corrected") == 0.25


def test_single_column_failure_is_complement():
    p = column_distinct_probability(5, 3, "corrected")
    assert lookup_failure_probability([5], 3, "corrected") == pytest.approx(1 - p)


def brute_force_distinct_probability(interval, n):
    total = interval**n
    good = sum(
        1 for seq in product(range(interval), repeat=n) if len(set(seq)) == n
    )
    return Fraction(good, total)


def test_corrected_matches_enumeration_small():
    for interval in range(1, 7):
        for n in range(1, 5):
            expected = float(brute_force_distinct_probability(interval, n))
            assert column_distinct_probability(interval, n, "corrected") == expected


def test_published_undercounts_by_factorial():
    # the binomial form differs from enumeration by n! wherever n > 1
    assert column_distinct_probability(4, 3, "as_published") * 6 == pytest.approx(
        column_distinct_probability(4, 3, "corrected")
    )


def test_iris_is_infeasible():
    # 150 rows but at most 43 distinct values in any column
    from sklearn.datasets import load_iris

    data = load_iris()
    rows = tuple(
        tuple(f"{v:.1f}" for v in data.data[i]) + (str(data.target_names[data.target[i]]),)
        for i in range(len(data.target))
    )
    ds = Dataset(columns=("sl", "sw", "pl", "pw", "sp"), rows=rows)
    assert max(len({r[i] for r in rows}) for i in range(5)) == 43
    assert lookup_reconstruct(project(ds)).status == "infeasible"


@settings(deadline=None, max_examples=80)
@given(small_datasets())
def test_lookup_soundness_and_agreement(ds):
    proj = project(ds)
    out = lookup_reconstruct(proj)
    has_distinct_column = any(
        len({row[i] for row in ds.rows}) == ds.n for i in range(ds.dimension)
    )
    assert out.feasible == has_distinct_column
    if out.feasible:
        assert Counter(out.rows) == Counter(ds.rows)
        assert len({row[out.anchor] for row in out.rows}) == len(out.rows)


@settings(deadline=None, max_examples=60)
@given(small_datasets())
def test_singles_subsume_lookup(ds):
    proj = project(ds)
    if not lookup_reconstruct(proj).feasible:
        return
    cands = enumerate_candidates(build_graph(proj))
    ded = deduce_singles(cands)
    truth = set(distinct_rows(ds))
    deduced_rows = {cands.candidates[k] for k in ded.deduced}
    assert truth <= deduced_rows
