"""Workbench for ranked emotion-carrier span annotation over spoken-narrative
transcripts: corpus loading, annotation storage, inter-annotator agreement,
and descriptive analyses, with CLI and HTTP front ends."""

from .agreement import (
    Aggregation,
    AgreementReport,
    Convention,
    MatchKind,
    MatchStrategy,
    PairScore,
    Position,
    STRATEGY_LATTICE,
    Unit,
    exact_pair_score,
    pairwise_report,
    set_coverage,
    soft_pair_score,
    span_coverage,
)
from .annotation import AnnotationSet, Span, Violation, span_surface, validate_annotation_set
from .corpus import (
    Corpus,
    Narrative,
    Token,
    attach_token_layers,
    load_corpus,
    mark_fillers,
    tokenize,
)
from .store import AnnotationStore

__version__ = "0.1.0"

__all__ = [
    "Aggregation",
    "AgreementReport",
    "AnnotationSet",
    "AnnotationStore",
    "Convention",
    "Corpus",
    "MatchKind",
    "MatchStrategy",
    "Narrative",
    "PairScore",
    "Position",
    "Span",
    "STRATEGY_LATTICE",
    "Token",
    "Unit",
    "Violation",
    "attach_token_layers",
    "exact_pair_score",
    "load_corpus",
    "mark_fillers",
    "pairwise_report",
    "set_coverage",
    "soft_pair_score",
    "span_coverage",
    "span_surface",
    "tokenize",
    "validate_annotation_set",
]
