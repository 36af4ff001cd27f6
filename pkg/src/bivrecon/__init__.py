"""Reconstruction of discrete multivariate datasets from their complete set
of pairwise (bivariate) projections."""

from .deduction import DeductionResult, deduce_doubles, deduce_singles
from .errors import (
    CandidateExplosion,
    ContradictoryDistinctCount,
    InconsistentInstance,
    InfeasibleStatements,
    InvalidDataset,
    InvalidOptions,
    InvalidProjections,
    InvalidSelection,
    OracleTooLarge,
    ParseError,
    ReconstructionError,
)
from .evaluation import ReconstructionMetrics, classify, compute_metrics
from .graph import CandidateSet, ReconstructionGraph, build_graph, enumerate_candidates
from .likelihood import (
    EdgeStatement,
    ScoredCandidates,
    Selection,
    build_statements,
    exact_cover_frequencies,
    score_candidates,
    select_rows,
)
from .lookup import (
    LookupOutcome,
    column_distinct_probability,
    lookup_failure_probability,
    lookup_reconstruct,
)
from .model import (
    Dataset,
    ProjectionSet,
    distinct_rows,
    project,
    validate_projections,
)
from .simulate import AggregateReport, TrialConfig, generate_dataset, run_trials

__version__ = "0.1.0"
