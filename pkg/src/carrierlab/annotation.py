"""Ranked span annotations and the guideline validator.

A span is a half-open [start, end) token range. An annotation set is one
annotator's rank-ordered spans for one narrative: list order is the rank,
rank 1 first. Structural problems (bounds, overlap) are errors and block
persistence; guideline breaches (too few spans, repetition, annotating a
later occurrence) are warnings — annotators ignore guidelines often enough
that their data must still be storable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Narrative
from .errors import NarrativeMismatch, SpanOutOfBounds

ERROR = "ERROR"
WARNING = "WARNING"


@dataclass(frozen=True)
class Span:
    """Half-open token range [start, end)."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad span [{self.start}, {self.end})")

    def overlaps(self, other: Span) -> bool:
        return self.start < other.end and other.start < self.end

    def indices(self) -> range:
        return range(self.start, self.end)


@dataclass
class AnnotationSet:
    """One annotator's ranked spans for one narrative."""

    annotator_id: str
    narrative_id: str
    spans: list[Span] = field(default_factory=list)
    revision: int = 0


@dataclass(frozen=True)
class Violation:
    level: str
    code: str
    message: str
    span: Span | None = None


def span_surface(narrative: Narrative, span: Span) -> str:
    """Space-joined token surfaces of the span."""
    if span.end > len(narrative.tokens):
        raise SpanOutOfBounds(span.start, span.end, len(narrative.tokens))
    return " ".join(t.surface for t in narrative.tokens[span.start : span.end])


def _span_lowers(narrative: Narrative, span: Span) -> tuple[str, ...]:
    return tuple(t.lower for t in narrative.tokens[span.start : span.end])


def _earlier_unannotated_occurrence(
    narrative: Narrative, span: Span, spans: list[Span]
) -> bool:
    """True if the span's token sequence also occurs starting before span.start
    at a position no span of the set touches."""
    needle = _span_lowers(narrative, span)
    width = len(needle)
    for at in range(span.start):
        if tuple(t.lower for t in narrative.tokens[at : at + width]) != needle:
            continue
        candidate = Span(at, at + width)
        if not any(candidate.overlaps(s) for s in spans):
            return True
    return False


def validate_annotation_set(aset: AnnotationSet, narrative: Narrative) -> list[Violation]:
    """Check one annotation set against its narrative.

    ERROR: span out of bounds; overlapping spans.
    WARNING: fewer than 3 spans (MinimumSpanCount); two spans with the same
    case-folded surface (RepeatedSurface); a span whose surface occurs earlier
    unannotated (FirstOccurrence).
    """
    if aset.narrative_id != narrative.id:
        raise NarrativeMismatch(aset.narrative_id, narrative.id)

    violations: list[Violation] = []
    token_count = len(narrative.tokens)
    in_bounds: list[Span] = []
    for span in aset.spans:
        if span.end > token_count:
            violations.append(
                Violation(
                    ERROR,
                    "SpanOutOfBounds",
                    f"span [{span.start}, {span.end}) exceeds {token_count} tokens",
                    span,
                )
            )
        else:
            in_bounds.append(span)

    for i, a in enumerate(in_bounds):
        for b in in_bounds[i + 1 :]:
            if a.overlaps(b):
                violations.append(
                    Violation(
                        ERROR,
                        "OverlappingSpans",
                        f"spans [{a.start}, {a.end}) and [{b.start}, {b.end}) overlap",
                        b,
                    )
                )

    if len(aset.spans) < 3:
        violations.append(
            Violation(
                WARNING,
                "MinimumSpanCount",
                f"{len(aset.spans)} spans; guideline asks for at least 3",
            )
        )

    seen: dict[str, Span] = {}
    for span in in_bounds:
        surface = " ".join(_span_lowers(narrative, span))
        if surface in seen:
            violations.append(
                Violation(
                    WARNING,
                    "RepeatedSurface",
                    f"span [{span.start}, {span.end}) repeats {surface!r}",
                    span,
                )
            )
        else:
            seen[surface] = span

    for span in in_bounds:
        if _earlier_unannotated_occurrence(narrative, span, in_bounds):
            violations.append(
                Violation(
                    WARNING,
                    "FirstOccurrence",
                    f"span [{span.start}, {span.end}) has an earlier unannotated occurrence",
                    span,
                )
            )

    return violations


def has_errors(violations: list[Violation]) -> bool:
    return any(v.level == ERROR for v in violations)
