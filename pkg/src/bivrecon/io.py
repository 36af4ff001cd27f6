"""File formats and pipeline glue: CSV ingestion, canonical projection and
report JSON, atomic writes.

Projection files are canonical: pairs sorted by column indices, points sorted
in column token order, fixed key order, so re-serializing a parsed file is
byte-identical.  Tokens are always strings.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from fractions import Fraction
from typing import Optional, Sequence, Union

from .deduction import deduce_doubles
from .errors import (
    ContradictoryDistinctCount,
    InvalidOptions,
    InvalidProjections,
    ParseError,
    ReconstructionError,
)
from .evaluation import classify, compute_metrics
from .graph import DEFAULT_CANDIDATE_CAP, CandidateSet, build_graph, enumerate_candidates
from .likelihood import (
    EdgeStatement,
    ScoredCandidates,
    Selection,
    TieReport,
    build_statements,
    exact_cover_frequencies,
    score_candidates,
    select_rows,
)
from .model import Dataset, ProjectionSet, Row, token_sort_key, validate_projections

REPORT_VERSION = 1


# ---------------------------------------------------------------------------
# CSV ingestion

def load_dataset_csv(
    path: Union[str, os.PathLike],
    columns: Optional[Sequence[str]] = None,
    header: bool = True,
) -> Dataset:
    """Read a CSV into a dataset of verbatim string tokens.

    ``columns`` selects and orders a subset, each entry being a header name
    or a 0-based index.  Blank lines are skipped; a short or long row raises
    ParseError with its 1-based line number.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        raw = [(reader.line_num, row) for row in reader if row]
    if not raw:
        raise ParseError(f"{path}: no rows")
    if header:
        names = [c.strip() for c in raw[0][1]]
        body = raw[1:]
    else:
        names = [f"c{i}" for i in range(len(raw[0][1]))]
        body = raw
    width = len(names)
    for line_num, row in body:
        if len(row) != width:
            raise ParseError(
                f"{path}: line {line_num} has {len(row)} fields, expected {width}"
            )

    if columns is None:
        picked = list(range(width))
    else:
        if not columns:
            raise InvalidOptions("empty column selection")
        picked = []
        for spec_item in columns:
            if spec_item in names:
                picked.append(names.index(spec_item))
            else:
                try:
                    idx = int(spec_item)
                except ValueError:
                    raise InvalidOptions(f"unknown column {spec_item!r}")
                if not 0 <= idx < width:
                    raise InvalidOptions(f"column index {idx} out of range 0..{width - 1}")
                picked.append(idx)
        if len(set(picked)) != len(picked):
            raise InvalidOptions("duplicate columns in selection")

    rows = tuple(tuple(row[i] for i in picked) for _, row in body)
    return Dataset(columns=tuple(names[i] for i in picked), rows=rows)


# ---------------------------------------------------------------------------
# Projection files

def projection_to_text(proj: ProjectionSet) -> str:
    """Serialize to the canonical projection-file JSON."""
    lines = [
        "{",
        f'  "dimension": {proj.dimension},',
        f'  "columns": {json.dumps(list(proj.columns), ensure_ascii=False)},',
        '  "pairs": [',
    ]
    pair_lines = []
    keys = [token_sort_key(dom) for dom in proj.domains]
    for (i, j) in sorted(proj.pairs):
        points = sorted(
            proj.pairs[(i, j)].items(), key=lambda kv: (keys[i](kv[0][0]), keys[j](kv[0][1]))
        )
        flat = [[vi, vj, mult] for (vi, vj), mult in points]
        body = json.dumps(flat, ensure_ascii=False, separators=(",", ":"))
        pair_lines.append(f'    {{"i": {i}, "j": {j}, "points": {body}}}')
    lines.append(",\n".join(pair_lines))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def projection_from_text(text: str) -> ProjectionSet:
    """Parse and validate a projection file; raises on structural problems."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}")
    try:
        dimension = int(doc["dimension"])
        columns = tuple(str(c) for c in doc["columns"])
        pairs = {}
        for entry in doc["pairs"]:
            i, j = int(entry["i"]), int(entry["j"])
            points = {}
            for vi, vj, mult in entry["points"]:
                points[(str(vi), str(vj))] = int(mult)
            pairs[(i, j)] = points
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed projection file: {exc}")
    domains = []
    for c in range(dimension):
        tokens = set()
        for (i, j), points in pairs.items():
            for (vi, vj) in points:
                if i == c:
                    tokens.add(vi)
                if j == c:
                    tokens.add(vj)
        domains.append(frozenset(tokens))
    proj = ProjectionSet(
        dimension=dimension, columns=columns, pairs=pairs, domains=tuple(domains)
    )
    violations = validate_projections(proj)
    if violations:
        raise InvalidProjections(violations)
    return proj


def write_text_atomic(path: Union[str, os.PathLike], text: str) -> None:
    """Write via a temp file in the target directory plus rename."""
    directory = os.path.dirname(os.fspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Reconstruction reports

def _score_to_json(score) -> Union[str, float]:
    return str(score) if isinstance(score, Fraction) else float(score)


def _score_from_json(value) -> Union[Fraction, float]:
    return Fraction(value) if isinstance(value, str) else float(value)


def _stage(name: str, fn):
    try:
        return fn()
    except ReconstructionError as exc:
        exc.stage = name
        raise


def run_pipeline(
    proj: ProjectionSet,
    distinct_count: int,
    weight_mode: str = "reciprocal",
    truth: Optional[set[Row]] = None,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> dict:
    """Enumerate, deduce, score, and select; returns the report document.

    The slot count is the caller-supplied distinct-row count minus the number
    of deduced rows; deducing more than claimed raises
    ContradictoryDistinctCount.
    """
    if distinct_count < 1:
        raise InvalidOptions("distinct_count must be >= 1")
    graph = _stage("graph", lambda: build_graph(proj))
    cands = _stage("enumerate", lambda: enumerate_candidates(graph, cap=candidate_cap))
    ded = _stage("deduce", lambda: deduce_doubles(cands))
    slots = distinct_count - len(ded)
    if slots < 0:
        raise ContradictoryDistinctCount(
            f"{len(ded)} rows deduced but distinct_count is {distinct_count}"
        )
    stmts = _stage("statements", lambda: build_statements(proj, cands, ded))
    undeduced = [k for k in range(len(cands)) if k not in ded.deduced]
    scores = _stage(
        "score", lambda: score_candidates(stmts, mode=weight_mode, universe=undeduced)
    )
    sel = _stage("select", lambda: select_rows(scores, slots))

    metrics_doc = None
    confusion = None
    if truth is not None:
        labels = _stage("evaluate", lambda: classify(cands, ded, sel, truth))
        metrics = compute_metrics(cands, ded, sel, truth)
        confusion = labels
        metrics_doc = {
            "truth_count": metrics.truth_count,
            "candidate_count": metrics.candidate_count,
            "deduced_count": metrics.deduced_count,
            "slots": metrics.slots,
            "actual_selected_correct": metrics.actual_selected_correct,
            "proportion_recovered": metrics.proportion_recovered,
            "expected_random": metrics.expected_random,
            "full_recovery": metrics.full_recovery,
        }

    tie_doc = None
    if sel.tie is not None:
        tie_doc = {
            "boundary_score": _score_to_json(sel.tie.boundary_score),
            "tied": sel.tie.tied,
            "chosen_among_tied": sel.tie.chosen_among_tied,
        }
    return {
        "version": REPORT_VERSION,
        "kind": "reconstruction-report",
        "columns": list(proj.columns),
        "n": proj.n,
        "distinct_count": distinct_count,
        "weight_mode": weight_mode,
        "candidate_cap": candidate_cap,
        "candidate_count": len(cands),
        "candidates": [list(row) for row in cands.candidates],
        "deduced": [[k, ded.rule[k]] for k in sorted(ded.deduced)],
        "statements": [
            {
                "i": st.edge[0][0],
                "vi": st.edge[0][1],
                "j": st.edge[1][0],
                "vj": st.edge[1][1],
                "required": st.required,
                "members": list(st.members),
            }
            for st in stmts
        ],
        "slots": slots,
        "scores": [[k, _score_to_json(scores.score(k))] for k in scores.universe],
        "selection": {
            "chosen": list(sel.chosen),
            "slots": sel.slots,
            "requested": sel.requested,
            "tie": tie_doc,
        },
        "metrics": metrics_doc,
        "confusion": confusion,
    }


def report_to_text(report: dict) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2) + "\n"


def report_from_text(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}")
    if doc.get("kind") != "reconstruction-report":
        raise ParseError("not a reconstruction report")
    return doc


def candidates_from_report(report: dict) -> CandidateSet:
    return CandidateSet(candidates=tuple(tuple(row) for row in report["candidates"]))


def scores_from_report(report: dict) -> ScoredCandidates:
    scores = {int(k): _score_from_json(v) for k, v in report["scores"]}
    exact = all(isinstance(v, Fraction) for v in scores.values()) if scores else True
    deduced = {k for k, _rule in report["deduced"]}
    universe = tuple(k for k in range(report["candidate_count"]) if k not in deduced)
    return ScoredCandidates(
        scores=scores, mode=report["weight_mode"], universe=universe, exact=exact
    )


def selection_from_report(report: dict) -> Selection:
    sel = report["selection"]
    tie = None
    if sel.get("tie"):
        tie = TieReport(
            boundary_score=_score_from_json(sel["tie"]["boundary_score"]),
            tied=sel["tie"]["tied"],
            chosen_among_tied=sel["tie"]["chosen_among_tied"],
        )
    return Selection(
        chosen=tuple(sel["chosen"]),
        slots=sel["slots"],
        requested=sel["requested"],
        tie=tie,
    )


def statements_from_report(report: dict) -> list[EdgeStatement]:
    out = []
    for st in report["statements"]:
        out.append(
            EdgeStatement(
                edge=((st["i"], st["vi"]), (st["j"], st["vj"])),
                required=st["required"],
                members=tuple(st["members"]),
            )
        )
    return out


def run_oracle_on_report(report: dict, cap: int) -> dict:
    """Exhaustively enumerate the report's feasible size-s covers."""
    stmts = statements_from_report(report)
    deduced = {k for k, _rule in report["deduced"]}
    universe = [k for k in range(report["candidate_count"]) if k not in deduced]
    count, proportions = exact_cover_frequencies(
        stmts, universe, report["slots"], cap=cap
    )
    return {
        "kind": "cover-oracle",
        "solutions": count,
        "slots": report["slots"],
        "proportions": [[k, str(proportions[k])] for k in universe],
    }
