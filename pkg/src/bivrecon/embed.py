"""2-D embeddings of candidate rows and deterministic SVG scatter output.

PCA projects ordinally-coded candidate values onto the top-2 eigenvectors of
their covariance.  Classical MDS on squared Euclidean distances is computed
through the small Gram matrix of the centered coordinates, which has the same
nonzero spectrum as the double-centered distance matrix but never
materializes anything larger than D x D.  Both use a cyclic Jacobi
eigensolver; the matrices involved are small, dense, and symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .evaluation import DEDUCED, FALSE_NEGATIVE, FALSE_POSITIVE, TRUE_NEGATIVE, TRUE_POSITIVE
from .graph import CandidateSet
from .likelihood import ScoredCandidates
from .model import column_is_numeric, token_sort_key

MDS_CANDIDATE_CAP = 20_000

BLACK = "#000000"
RED = "#cc0000"
YELLOW = "#e6c800"
WHITE = "#ffffff"


@dataclass
class EmbeddingResult:
    method: str  # "pca" | "mds"
    coords: list[tuple[float, float]]
    eigenvalues: tuple[float, float]
    codings: list[dict]
    warnings: tuple[str, ...] = ()


@dataclass
class PlotSpec:
    """Per-candidate fill colors plus the legend explaining them."""

    mode: str  # "likelihood" | "accuracy"
    fills: tuple[str, ...]
    legend: dict[str, str]


def jacobi_eigh(matrix: np.ndarray, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a small symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors-as-columns) sorted descending.  Sweeps
    stop once the off-diagonal mass falls below 1e-14 of the Frobenius norm,
    comfortably inside the 1e-9 relative residual the callers require.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    fro = math.sqrt(float((a * a).sum()))
    if fro == 0.0:
        return np.zeros(n), v
    tol = 1e-14 * fro
    upper = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        # summed directly: total-minus-diagonal cancels catastrophically
        off = math.sqrt(2.0 * float((a[upper] ** 2).sum()))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol / max(n, 1):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = a[:, p].copy()
                rot_q = a[:, q].copy()
                a[:, p] = c * rot_p - s * rot_q
                a[:, q] = s * rot_p + c * rot_q
                rot_p = a[p, :].copy()
                rot_q = a[q, :].copy()
                a[p, :] = c * rot_p - s * rot_q
                a[q, :] = s * rot_p + c * rot_q
                rot_p = v[:, p].copy()
                rot_q = v[:, q].copy()
                v[:, p] = c * rot_p - s * rot_q
                v[:, q] = s * rot_p + c * rot_q
    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def _code_candidates(cands: CandidateSet) -> tuple[np.ndarray, list[dict]]:
    """Numeric-parse each column when possible, else ordinal-code by token
    order; the coding is recorded for the plot metadata."""
    rows = cands.candidates
    if not rows:
        raise ValueError("need at least one candidate to embed")
    d = len(rows[0])
    codings: list[dict] = []
    columns = []
    for i in range(d):
        tokens = [row[i] for row in rows]
        domain = sorted(set(tokens), key=token_sort_key(set(tokens)))
        if column_is_numeric(domain):
            columns.append([float(t) for t in tokens])
            codings.append({"column": i, "type": "numeric"})
        else:
            level = {t: k for k, t in enumerate(domain)}
            columns.append([float(level[t]) for t in tokens])
            codings.append({"column": i, "type": "ordinal", "levels": domain})
    return np.array(columns, dtype=float).T, codings


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0:
            out[:, k] = -col
    return out


def _top2(centered: np.ndarray, scatter: np.ndarray) -> tuple[list[tuple[float, float]], tuple[float, float], np.ndarray]:
    eigenvalues, vectors = jacobi_eigh(scatter)
    vectors = _fix_signs(vectors)
    d = scatter.shape[0]
    basis = vectors[:, : min(2, d)]
    coords = centered @ basis
    if coords.shape[1] < 2:
        coords = np.column_stack([coords, np.zeros(len(coords))])
    pair = (
        float(eigenvalues[0]) if d >= 1 else 0.0,
        float(eigenvalues[1]) if d >= 2 else 0.0,
    )
    return [(float(x), float(y)) for x, y in coords], pair, eigenvalues


def pca_2d(cands: CandidateSet) -> EmbeddingResult:
    """Project candidates onto the top-2 principal axes of their values."""
    data, codings = _code_candidates(cands)
    centered = data - data.mean(axis=0)
    k = len(data)
    cov = (centered.T @ centered) / max(k - 1, 1)
    coords, pair, _ = _top2(centered, cov)
    return EmbeddingResult(method="pca", coords=coords, eigenvalues=pair, codings=codings)


def mds_2d(cands: CandidateSet) -> EmbeddingResult:
    """Classical MDS of candidate rows via the Gram-matrix route.

    Input distances are Euclidean in coded value space, so the double-centered
    squared-distance matrix shares its nonzero spectrum with the D x D scatter
    matrix and the embedding never needs a k x k decomposition.
    """
    if len(cands) > MDS_CANDIDATE_CAP:
        raise ValueError(
            f"MDS supports at most {MDS_CANDIDATE_CAP} candidates, got {len(cands)}"
        )
    data, codings = _code_candidates(cands)
    centered = data - data.mean(axis=0)
    scatter = centered.T @ centered
    coords, pair, eigenvalues = _top2(centered, scatter)
    warnings = []
    largest = float(eigenvalues[0]) if len(eigenvalues) else 0.0
    smallest = float(eigenvalues[-1]) if len(eigenvalues) else 0.0
    if largest > 0 and smallest < -1e-6 * largest:
        warnings.append(
            f"negative eigenvalue {smallest:.3e} beyond drift tolerance"
        )
    return EmbeddingResult(
        method="mds",
        coords=coords,
        eigenvalues=pair,
        codings=codings,
        warnings=tuple(warnings),
    )


def likelihood_plot_spec(
    deduced: frozenset[int], scores: ScoredCandidates, count: int
) -> PlotSpec:
    """Deduced rows in black; undeduced on a grayscale ramp, darker = higher
    score."""
    values = {k: float(scores.score(k)) for k in range(count) if k not in deduced}
    lo = min(values.values(), default=0.0)
    hi = max(values.values(), default=0.0)
    span = hi - lo
    fills = []
    for k in range(count):
        if k in deduced:
            fills.append(BLACK)
            continue
        t = 0.5 if span == 0.0 else (values[k] - lo) / span
        gray = 230 - round(200 * t)
        fills.append(f"#{gray:02x}{gray:02x}{gray:02x}")
    legend = {
        "black": "deduced row",
        "gradient": "undeduced candidate, darker = higher score",
    }
    return PlotSpec(mode="likelihood", fills=tuple(fills), legend=legend)


def accuracy_plot_spec(labels: Sequence[str]) -> PlotSpec:
    """Deduced and correctly selected rows black, wrong guesses red, missed
    rows yellow, correctly rejected phantoms white."""
    color = {
        DEDUCED: BLACK,
        TRUE_POSITIVE: BLACK,
        FALSE_POSITIVE: RED,
        FALSE_NEGATIVE: YELLOW,
        TRUE_NEGATIVE: WHITE,
    }
    fills = tuple(color[label] for label in labels)
    legend = {
        "black": "deduced or correctly selected row",
        "red": "selected phantom (false positive)",
        "yellow": "missed true row (false negative)",
        "white": "rejected phantom (true negative)",
    }
    return PlotSpec(mode="accuracy", fills=fills, legend=legend)


def render_plot(
    emb: EmbeddingResult,
    spec: PlotSpec,
    size: int = 640,
    margin: float = 30.0,
    radius: float = 4.0,
    metadata: Optional[dict] = None,
) -> str:
    """Emit an SVG 1.1 scatter of the embedding, byte-stable for fixed input."""
    if len(emb.coords) != len(spec.fills):
        raise ValueError("embedding and plot spec disagree on point count")
    xs = [p[0] for p in emb.coords]
    ys = [p[1] for p in emb.coords]
    span_x = max(xs) - min(xs) if xs else 0.0
    span_y = max(ys) - min(ys) if ys else 0.0
    inner = size - 2 * margin

    def place(value: float, low: float, span: float, flip: bool) -> float:
        t = 0.5 if span == 0.0 else (value - low) / span
        if flip:
            t = 1.0 - t
        return margin + t * inner

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
    ]
    meta = {
        "method": emb.method,
        "eigenvalues": [repr(v) for v in emb.eigenvalues],
        "codings": emb.codings,
        "legend": spec.legend,
        "mode": spec.mode,
    }
    if emb.warnings:
        meta["warnings"] = list(emb.warnings)
    if metadata:
        meta.update(metadata)
    for key in sorted(meta):
        lines.append(f"<!-- {key}: {meta[key]} -->")
    lines.append(f'<rect width="{size}" height="{size}" fill="#ffffff"/>')
    for (x, y), fill in zip(emb.coords, spec.fills):
        cx = place(x, min(xs), span_x, flip=False)
        cy = place(y, min(ys), span_y, flip=True)
        lines.append(
            f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{radius:.3f}" '
            f'fill="{fill}" stroke="#666666" stroke-width="0.500"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
