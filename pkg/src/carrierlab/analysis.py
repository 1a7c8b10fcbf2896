"""Descriptive analyses over stored annotations.

Covers the reporting side of the workbench: per-annotator span statistics,
the share of spans containing sentiment-bearing words, which text fragments
different annotators agree on, and where hesitation fillers sit relative to
annotated spans (with a seeded random baseline of content-word spans for
comparison).
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .agreement import MatchKind, MatchStrategy, Position, Unit, span_coverage
from .annotation import Span
from .corpus import Corpus, Narrative
from .errors import (
    EmptyStore,
    InsufficientContentTokens,
    MissingLexicon,
    UnknownNarrativeId,
)


@dataclass
class AnnotatorStats:
    annotator_id: str
    narrative_count: int
    spans_min: int
    spans_max: int
    spans_mean: float
    tokens_per_span: float
    tokens_per_span_no_punct: float
    pos_distribution: dict[str, float] = field(default_factory=dict)


@dataclass
class FillerHistogram:
    window: int
    span_count: int
    bucket_counts: dict[int, int]
    inside_count: int
    none_count: int
    bucket_percent: dict[int, float]
    inside_percent: float
    none_percent: float


def annotation_stats(corpus: Corpus, store) -> list[AnnotatorStats]:
    """Span-count and span-length statistics per annotator, with the POS
    distribution of annotated tokens when a POS layer is present."""
    sets = store.all_sets()
    if not sets:
        raise EmptyStore()
    by_annotator: dict[str, list] = defaultdict(list)
    for aset in sets:
        by_annotator[aset.annotator_id].append(aset)

    result = []
    for annotator_id in sorted(by_annotator):
        counts = []
        token_lengths = []
        no_punct_lengths = []
        pos_counts: Counter[str] = Counter()
        for aset in by_annotator[annotator_id]:
            counts.append(len(aset.spans))
            narrative = corpus.narratives[aset.narrative_id]
            for span in aset.spans:
                tokens = narrative.tokens[span.start : span.end]
                token_lengths.append(len(tokens))
                no_punct_lengths.append(sum(1 for t in tokens if not t.is_punct))
                pos_counts.update(t.pos for t in tokens if t.pos is not None)
        total_pos = sum(pos_counts.values())
        result.append(
            AnnotatorStats(
                annotator_id=annotator_id,
                narrative_count=len(counts),
                spans_min=min(counts),
                spans_max=max(counts),
                spans_mean=sum(counts) / len(counts),
                tokens_per_span=(
                    sum(token_lengths) / len(token_lengths) if token_lengths else 0.0
                ),
                tokens_per_span_no_punct=(
                    sum(no_punct_lengths) / len(no_punct_lengths)
                    if no_punct_lengths
                    else 0.0
                ),
                pos_distribution={
                    tag: pos_counts[tag] / total_pos for tag in sorted(pos_counts)
                },
            )
        )
    return result


def sentiment_fraction(corpus: Corpus, store) -> dict[str, float]:
    """Per annotator: share of spans containing at least one non-punctuation
    token whose lemma (or case-folded surface) has nonzero lexicon polarity."""
    if not corpus.sentiment_lexicon:
        raise MissingLexicon("sentiment")
    carrying: Counter[str] = Counter()
    totals: Counter[str] = Counter()
    for aset in store.all_sets():
        narrative = corpus.narratives[aset.narrative_id]
        totals[aset.annotator_id] += len(aset.spans)
        for span in aset.spans:
            if any(
                not t.is_punct
                and corpus.sentiment_lexicon.get(t.unit(use_lemma=True), 0.0) != 0.0
                for t in narrative.tokens[span.start : span.end]
            ):
                carrying[aset.annotator_id] += 1
    return {
        annotator_id: (carrying[annotator_id] / totals[annotator_id] if totals[annotator_id] else 0.0)
        for annotator_id in sorted(totals)
    }


def _common_units(
    narrative: Narrative, s: Span, s_prime: Span, strategy: MatchStrategy
) -> list[str]:
    use_lemma = strategy.unit is Unit.LEMMA
    if strategy.position is Position.AWARE:
        shared = set(s.indices()) & set(s_prime.indices())
        return [
            narrative.tokens[i].unit(use_lemma)
            for i in sorted(shared)
            if not (strategy.ignore_punct and narrative.tokens[i].is_punct)
        ]
    def units(span: Span) -> list[str]:
        return [
            t.unit(use_lemma)
            for t in narrative.tokens[span.start : span.end]
            if not (strategy.ignore_punct and t.is_punct)
        ]
    common = Counter(units(s)) & Counter(units(s_prime))
    return list(common.elements())


def overlap_histogram(
    corpus: Corpus, store, strategy: MatchStrategy
) -> list[tuple[str, int]]:
    """Count, over all annotator pairs and narratives, the shared fragments
    of positively-covering span pairs. Keys are sorted case-folded unit
    multisets, so differently ordered or partially matching spans that share
    the same words aggregate together."""
    if strategy.match_kind is not MatchKind.PARTIAL:
        raise ValueError("overlap histogram needs a partial-match strategy")
    by_annotator: dict[str, dict[str, list[Span]]] = defaultdict(dict)
    for aset in store.all_sets():
        by_annotator[aset.annotator_id][aset.narrative_id] = aset.spans
    annotator_ids = sorted(by_annotator)
    counts: Counter[str] = Counter()
    for i, a in enumerate(annotator_ids):
        for b in annotator_ids[i + 1 :]:
            for nid in sorted(by_annotator[a].keys() & by_annotator[b].keys()):
                narrative = corpus.narratives[nid]
                for s in by_annotator[a][nid]:
                    for s_prime in by_annotator[b][nid]:
                        if span_coverage(s, s_prime, narrative, strategy) <= 0.0:
                            continue
                        key = " ".join(
                            sorted(_common_units(narrative, s, s_prime, strategy))
                        )
                        counts[key] += 1
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def _filler_position(
    narrative: Narrative, span: Span, filler_index: int, skip_punct: bool
) -> int:
    """Signed token distance of a filler from a span: 0 inside, +1 the token
    right after, -1 the token right before. skip_punct counts only
    non-punctuation tokens as distance."""
    if span.start <= filler_index < span.end:
        return 0
    if filler_index >= span.end:
        if skip_punct:
            return sum(
                1
                for j in range(span.end, filler_index + 1)
                if not narrative.tokens[j].is_punct
            )
        return filler_index - (span.end - 1)
    if skip_punct:
        return -sum(
            1
            for j in range(filler_index, span.start)
            if not narrative.tokens[j].is_punct
        )
    return filler_index - span.start


def filler_position_histogram(
    corpus: Corpus,
    spans: list[tuple[str, Span]],
    window: int = 5,
    skip_punct_distance: bool = False,
) -> FillerHistogram:
    """For each span, find the nearest filler token and bucket its relative
    position. Ties between equally near preceding and following fillers go
    to the following one. Percentages are over the span count."""
    bucket_counts = {p: 0 for p in range(-window, window + 1) if p != 0}
    inside = 0
    none_in_window = 0
    for narrative_id, span in spans:
        narrative = corpus.narratives[narrative_id]
        best: int | None = None
        for token in narrative.tokens:
            if not token.is_filler:
                continue
            pos = _filler_position(narrative, span, token.index, skip_punct_distance)
            if best is None or abs(pos) < abs(best) or (abs(pos) == abs(best) and pos > best):
                best = pos
        if best is None or abs(best) > window:
            none_in_window += 1
        elif best == 0:
            inside += 1
        else:
            bucket_counts[best] += 1

    span_count = len(spans)

    def percent(count: int) -> float:
        return count * 100.0 / span_count if span_count else 0.0

    return FillerHistogram(
        window=window,
        span_count=span_count,
        bucket_counts=bucket_counts,
        inside_count=inside,
        none_count=none_in_window,
        bucket_percent={p: percent(c) for p, c in bucket_counts.items()},
        inside_percent=percent(inside),
        none_percent=percent(none_in_window) if span_count else 100.0,
    )


def carrier_spans(store) -> list[tuple[str, Span]]:
    """All stored spans as (narrative_id, span), annotators pooled."""
    pairs = []
    for aset in sorted(store.all_sets(), key=lambda s: (s.annotator_id, s.narrative_id)):
        for span in aset.spans:
            pairs.append((aset.narrative_id, span))
    return pairs


def default_baseline_counts(store) -> dict[str, int]:
    """Per-narrative carrier count, the default baseline sample size."""
    counts: Counter[str] = Counter()
    for aset in store.all_sets():
        counts[aset.narrative_id] += len(aset.spans)
    return dict(counts)


def random_content_baseline(
    corpus: Corpus, counts: dict[str, int], seed: int
) -> list[tuple[str, Span]]:
    """Sample, per narrative, single-token spans uniformly without
    replacement from non-filler content-word tokens. Deterministic per seed."""
    rng = random.Random(seed)
    sampled: list[tuple[str, Span]] = []
    for narrative_id in sorted(counts):
        narrative = corpus.narratives.get(narrative_id)
        if narrative is None:
            raise UnknownNarrativeId(narrative_id)
        pool = [
            t.index
            for t in narrative.tokens
            if t.pos in corpus.content_pos_tags and not t.is_filler
        ]
        wanted = counts[narrative_id]
        if wanted > len(pool):
            raise InsufficientContentTokens(narrative_id, wanted, len(pool))
        for index in sorted(rng.sample(pool, wanted)):
            sampled.append((narrative_id, Span(index, index + 1)))
    return sampled
