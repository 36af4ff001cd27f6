"""Shared fixtures: known-answer datasets and the acceptance summary hook."""

import pytest

from bivrecon.deduction import DeductionResult
from bivrecon.graph import CandidateSet
from bivrecon.likelihood import EdgeStatement, Selection
from bivrecon.model import Dataset

# Two distinct datasets over {0,1}^3 (rows of even / odd parity) whose
# pairwise projections are identical: exact reconstruction is impossible.
EVEN_PARITY_ROWS = (("0", "0", "0"), ("0", "1", "1"), ("1", "0", "1"), ("1", "1", "0"))
ODD_PARITY_ROWS = (("0", "0", "1"), ("0", "1", "0"), ("1", "0", "0"), ("1", "1", "1"))


@pytest.fixture
def even_parity() -> Dataset:
    return Dataset(columns=("x", "y", "z"), rows=EVEN_PARITY_ROWS)


@pytest.fixture
def odd_parity() -> Dataset:
    return Dataset(columns=("x", "y", "z"), rows=ODD_PARITY_ROWS)


@pytest.fixture
def three_rows() -> Dataset:
    """Column 0 is all-distinct, so every reconstruction route succeeds."""
    return Dataset(
        columns=("a", "b", "c"),
        rows=(("1", "5", "5"), ("2", "5", "6"), ("3", "6", "5")),
    )


@pytest.fixture
def worked_statements():
    """Eight candidates 0..7 (A..H); three constraints, one slot each."""
    A, D, E, F, G, H = 0, 3, 4, 5, 6, 7
    return [
        EdgeStatement(edge=((0, "p"), (1, "p")), required=1, members=(A, F, H)),
        EdgeStatement(edge=((0, "q"), (1, "q")), required=1, members=(E, F, G)),
        EdgeStatement(edge=((0, "r"), (1, "r")), required=1, members=(D, H)),
    ]


@pytest.fixture
def selection_scenario():
    """105 candidates, 32 true rows, 21 deduced, 11 slots: the selection gets
    6 right and 5 wrong, leaving 5 misses and 68 rejected phantoms."""
    candidates = tuple((f"v{k}", f"w{k}") for k in range(105))
    truth = set(candidates[:32])
    ded = DeductionResult(
        deduced=frozenset(range(21)),
        rule={k: "double" for k in range(21)},
        edge_coverage={},
    )
    chosen = tuple(range(21, 27)) + tuple(range(32, 37))
    sel = Selection(chosen=chosen, slots=11, requested=11)
    return CandidateSet(candidates=candidates), ded, sel, truth


# --- acceptance criteria summary -------------------------------------------

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"{status}  {name}{suffix}")
