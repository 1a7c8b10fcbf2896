"""Pairwise inter-annotator agreement over the matching-strategy lattice.

Two families of scores share one PairScore shape:

  exact    — spans match as wholes (same indices, or same unit strings when
             position-agnostic); positive agreement 2TP/(2TP+FP+FN).
  partial  — fractional credit via span coverage: c(s,s') is the share of
             s's tokens found in s', summed over span sets and normalized
             into soft precision/recall/F1.

Strategy axes: match kind, position awareness, matching unit (surface vs
lemma), punctuation handling, the precision/recall orientation, and whether
a span's summed coverage is capped at 1. Defaults follow the bounded,
hypothesis-oriented reading; the alternates are kept selectable because
reported numbers elsewhere may use them.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .annotation import AnnotationSet, Span
from .corpus import Corpus, Narrative
from .errors import InsufficientAnnotators, SpanOutOfBounds


class MatchKind(str, Enum):
    EXACT = "exact"
    PARTIAL = "partial"


class Position(str, Enum):
    AWARE = "aware"
    AGNOSTIC = "agnostic"


class Unit(str, Enum):
    TOKEN = "token"
    LEMMA = "lemma"


class Convention(str, Enum):
    """Which set's coverage feeds precision.

    HYPOTHESIS_COVERED: precision = C(S_H,S_R)/|S_H| (how much of the
    hypothesis is covered). REFERENCE_COVERED: precision = C(S_R,S_H)/|S_H|
    (reference coverage normalized by hypothesis size).
    """

    HYPOTHESIS_COVERED = "hypothesis_covered"
    REFERENCE_COVERED = "reference_covered"


class Aggregation(str, Enum):
    MICRO = "micro"
    MACRO = "macro"


@dataclass(frozen=True)
class MatchStrategy:
    match_kind: MatchKind
    position: Position
    unit: Unit = Unit.TOKEN
    ignore_punct: bool = False
    precision_convention: Convention = Convention.HYPOTHESIS_COVERED
    cap_coverage: bool = True


# The four standard configurations, in report order.
STRATEGY_LATTICE = (
    ("a", MatchStrategy(MatchKind.EXACT, Position.AGNOSTIC, Unit.TOKEN)),
    ("b", MatchStrategy(MatchKind.PARTIAL, Position.AWARE, Unit.TOKEN)),
    ("c", MatchStrategy(MatchKind.PARTIAL, Position.AGNOSTIC, Unit.TOKEN)),
    ("d", MatchStrategy(MatchKind.PARTIAL, Position.AGNOSTIC, Unit.LEMMA)),
)


@dataclass(frozen=True)
class PairScore:
    precision: float
    recall: float
    f1: float
    tp: int | None = None
    fp: int | None = None
    fn: int | None = None


@dataclass
class AgreementReport:
    strategy: MatchStrategy
    annotator_ids: list[str]
    matrix: dict[tuple[str, str], PairScore]
    mean_f1: float
    aggregation: Aggregation


def _check_span(span: Span, narrative: Narrative) -> None:
    if span.end > len(narrative.tokens):
        raise SpanOutOfBounds(span.start, span.end, len(narrative.tokens))


def _span_units(narrative: Narrative, span: Span, strategy: MatchStrategy) -> list[str]:
    use_lemma = strategy.unit is Unit.LEMMA
    return [
        t.unit(use_lemma)
        for t in narrative.tokens[span.start : span.end]
        if not (strategy.ignore_punct and t.is_punct)
    ]


def _span_indices(narrative: Narrative, span: Span, strategy: MatchStrategy) -> list[int]:
    return [
        i
        for i in span.indices()
        if not (strategy.ignore_punct and narrative.tokens[i].is_punct)
    ]


def span_coverage(
    s: Span, s_prime: Span, narrative: Narrative, strategy: MatchStrategy
) -> float:
    """c(s, s'): fraction of s's units also present in s'.

    Position-aware compares token indices; position-agnostic intersects the
    unit-string multisets. A span with no units (all punctuation ignored)
    has coverage 0.
    """
    _check_span(s, narrative)
    _check_span(s_prime, narrative)
    if strategy.position is Position.AWARE:
        own = _span_indices(narrative, s, strategy)
        if not own:
            return 0.0
        other = set(_span_indices(narrative, s_prime, strategy))
        return sum(1 for i in own if i in other) / len(own)
    own_units = _span_units(narrative, s, strategy)
    if not own_units:
        return 0.0
    shared = Counter(own_units) & Counter(_span_units(narrative, s_prime, strategy))
    return sum(shared.values()) / len(own_units)


def set_coverage(
    spans: list[Span],
    spans_prime: list[Span],
    narrative: Narrative,
    strategy: MatchStrategy,
) -> float:
    """C(S, S'): summed span coverages, each source span capped at 1 unless
    the strategy disables the cap."""
    total = 0.0
    for s in spans:
        inner = sum(span_coverage(s, sp, narrative, strategy) for sp in spans_prime)
        if strategy.cap_coverage:
            inner = min(inner, 1.0)
        total += inner
    return total


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _convention_scores(
    c_rh: float, c_hr: float, n_r: int, n_h: int, convention: Convention
) -> tuple[float, float]:
    """Map raw coverages to (precision, recall). Empty sides: both empty is
    perfect agreement, one empty is total disagreement."""
    if n_r == 0 and n_h == 0:
        return 1.0, 1.0
    if n_r == 0 or n_h == 0:
        return 0.0, 0.0
    if convention is Convention.HYPOTHESIS_COVERED:
        return c_hr / n_h, c_rh / n_r
    return c_rh / n_h, c_hr / n_r


def soft_pair_score(
    spans_r: AnnotationSet | list[Span],
    spans_h: AnnotationSet | list[Span],
    narrative: Narrative,
    strategy: MatchStrategy,
) -> PairScore:
    """Soft precision/recall/F1 of reference set vs hypothesis set."""
    r = spans_r.spans if isinstance(spans_r, AnnotationSet) else spans_r
    h = spans_h.spans if isinstance(spans_h, AnnotationSet) else spans_h
    c_rh = set_coverage(r, h, narrative, strategy)
    c_hr = set_coverage(h, r, narrative, strategy)
    precision, recall = _convention_scores(
        c_rh, c_hr, len(r), len(h), strategy.precision_convention
    )
    return PairScore(precision, recall, _f1(precision, recall))


def _exact_key(narrative: Narrative, span: Span, strategy: MatchStrategy):
    if strategy.position is Position.AWARE:
        return (span.start, span.end)
    return tuple(_span_units(narrative, span, strategy))


def exact_pair_score(
    spans_a: AnnotationSet | list[Span],
    spans_b: AnnotationSet | list[Span],
    narrative: Narrative,
    strategy: MatchStrategy,
) -> PairScore:
    """Whole-span matching: TP is the size of a maximum one-to-one matching,
    which for an equivalence relation is the multiset intersection of match
    keys. Score is positive agreement 2TP/(2TP+FP+FN)."""
    a = spans_a.spans if isinstance(spans_a, AnnotationSet) else spans_a
    b = spans_b.spans if isinstance(spans_b, AnnotationSet) else spans_b
    for span in (*a, *b):
        _check_span(span, narrative)
    if not a and not b:
        return PairScore(1.0, 1.0, 1.0, tp=0, fp=0, fn=0)
    keys_a = Counter(_exact_key(narrative, s, strategy) for s in a)
    keys_b = Counter(_exact_key(narrative, s, strategy) for s in b)
    tp = sum((keys_a & keys_b).values())
    fp = len(b) - tp
    fn = len(a) - tp
    precision = tp / len(b) if b else 0.0
    recall = tp / len(a) if a else 0.0
    agreement = 2 * tp / (2 * tp + fp + fn)
    return PairScore(precision, recall, agreement, tp=tp, fp=fp, fn=fn)


def pair_score(
    spans_a: AnnotationSet | list[Span],
    spans_b: AnnotationSet | list[Span],
    narrative: Narrative,
    strategy: MatchStrategy,
) -> PairScore:
    if strategy.match_kind is MatchKind.EXACT:
        return exact_pair_score(spans_a, spans_b, narrative, strategy)
    return soft_pair_score(spans_a, spans_b, narrative, strategy)


def _micro_pair(
    shared: list[tuple[Narrative, AnnotationSet, AnnotationSet]],
    strategy: MatchStrategy,
) -> PairScore:
    if strategy.match_kind is MatchKind.EXACT:
        tp = fp = fn = 0
        n_a = n_b = 0
        for narrative, set_a, set_b in shared:
            cell = exact_pair_score(set_a, set_b, narrative, strategy)
            tp += cell.tp or 0
            fp += cell.fp or 0
            fn += cell.fn or 0
            n_a += len(set_a.spans)
            n_b += len(set_b.spans)
        if n_a == 0 and n_b == 0:
            return PairScore(1.0, 1.0, 1.0, tp=0, fp=0, fn=0)
        precision = tp / n_b if n_b else 0.0
        recall = tp / n_a if n_a else 0.0
        agreement = 2 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) else 0.0
        return PairScore(precision, recall, agreement, tp=tp, fp=fp, fn=fn)
    c_rh = c_hr = 0.0
    n_r = n_h = 0
    for narrative, set_r, set_h in shared:
        c_rh += set_coverage(set_r.spans, set_h.spans, narrative, strategy)
        c_hr += set_coverage(set_h.spans, set_r.spans, narrative, strategy)
        n_r += len(set_r.spans)
        n_h += len(set_h.spans)
    precision, recall = _convention_scores(
        c_rh, c_hr, n_r, n_h, strategy.precision_convention
    )
    return PairScore(precision, recall, _f1(precision, recall))


def _macro_pair(
    shared: list[tuple[Narrative, AnnotationSet, AnnotationSet]],
    strategy: MatchStrategy,
) -> PairScore:
    """Averages per-narrative precision/recall/F1 independently; F1 here is
    the mean of the narrative F1s, not recomputed from the averaged rates."""
    cells = [pair_score(set_a, set_b, narrative, strategy) for narrative, set_a, set_b in shared]
    n = len(cells)
    precision = sum(c.precision for c in cells) / n
    recall = sum(c.recall for c in cells) / n
    f1 = sum(c.f1 for c in cells) / n
    if strategy.match_kind is MatchKind.EXACT:
        return PairScore(
            precision,
            recall,
            f1,
            tp=sum(c.tp or 0 for c in cells),
            fp=sum(c.fp or 0 for c in cells),
            fn=sum(c.fn or 0 for c in cells),
        )
    return PairScore(precision, recall, f1)


def pairwise_report(
    corpus: Corpus,
    store,
    strategy: MatchStrategy,
    aggregation: Aggregation = Aggregation.MICRO,
) -> AgreementReport:
    """Score every annotator pair over the narratives both annotated.

    Pair (a, b) uses a as the reference set and b as the hypothesis set;
    annotators are in sorted id order, pairs upper-triangular. A pair with
    no shared narrative scores 0. Raises InsufficientAnnotators when no two
    annotators share a narrative.
    """
    by_annotator: dict[str, dict[str, AnnotationSet]] = {}
    for aset in store.all_sets():
        by_annotator.setdefault(aset.annotator_id, {})[aset.narrative_id] = aset
    annotator_ids = sorted(by_annotator)
    if len(annotator_ids) < 2:
        raise InsufficientAnnotators()

    matrix: dict[tuple[str, str], PairScore] = {}
    any_shared = False
    for i, a in enumerate(annotator_ids):
        for b in annotator_ids[i + 1 :]:
            shared = [
                (corpus.narratives[nid], by_annotator[a][nid], by_annotator[b][nid])
                for nid in sorted(by_annotator[a].keys() & by_annotator[b].keys())
            ]
            if not shared:
                matrix[(a, b)] = PairScore(0.0, 0.0, 0.0)
                continue
            any_shared = True
            if aggregation is Aggregation.MACRO:
                matrix[(a, b)] = _macro_pair(shared, strategy)
            else:
                matrix[(a, b)] = _micro_pair(shared, strategy)
    if not any_shared:
        raise InsufficientAnnotators()

    mean_f1 = sum(score.f1 for score in matrix.values()) / len(matrix)
    return AgreementReport(strategy, annotator_ids, matrix, mean_f1, aggregation)
