"""Report rendering shared by the CLI and the HTTP service.

Machine-readable output is line-delimited JSON built here and only here, so
both front ends emit byte-identical reports for identical inputs. Human
output is plain tab-separated tables.
"""

from __future__ import annotations

import json

from .agreement import AgreementReport, MatchKind, MatchStrategy
from .analysis import AnnotatorStats, FillerHistogram
from .annotation import AnnotationSet, Violation, span_surface
from .corpus import Narrative


def record_line(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False) + "\n"


def strategy_record(strategy: MatchStrategy) -> dict:
    return {
        "match": strategy.match_kind.value,
        "position": strategy.position.value,
        "unit": strategy.unit.value,
        "ignore_punct": strategy.ignore_punct,
        "precision_convention": strategy.precision_convention.value,
        "cap_coverage": strategy.cap_coverage,
    }


def agreement_record(report: AgreementReport) -> dict:
    pairs = []
    for (a, b), score in sorted(report.matrix.items()):
        pair = {
            "a": a,
            "b": b,
            "precision": score.precision,
            "recall": score.recall,
            "f1": score.f1,
        }
        if score.tp is not None:
            pair.update({"tp": score.tp, "fp": score.fp, "fn": score.fn})
        pairs.append(pair)
    return {
        "report": "agreement",
        "strategy": strategy_record(report.strategy),
        "aggregation": report.aggregation.value,
        "annotators": report.annotator_ids,
        "pairs": pairs,
        "mean_f1": report.mean_f1,
    }


def agreement_records(reports: list[AgreementReport]) -> str:
    return "".join(record_line(agreement_record(r)) for r in reports)


def agreement_table(report: AgreementReport, label: str | None = None) -> str:
    """Upper-triangular pairwise matrix with a 1.000 diagonal."""
    strategy = report.strategy
    head = (
        f"{strategy.match_kind.value}/{strategy.position.value}/{strategy.unit.value}"
        f"\tignore_punct={str(strategy.ignore_punct).lower()}"
        f"\tconvention={strategy.precision_convention.value}"
        f"\tcap={str(strategy.cap_coverage).lower()}"
        f"\taggregation={report.aggregation.value}"
    )
    if label:
        head = f"({label})\t{head}"
    lines = [head]
    ids = report.annotator_ids
    lines.append("\t" + "\t".join(ids))
    for i, a in enumerate(ids):
        cells = []
        for j, b in enumerate(ids):
            if j < i:
                cells.append("")
            elif j == i:
                cells.append("1.000")
            else:
                cells.append(f"{report.matrix[(a, b)].f1:.3f}")
        lines.append(a + "\t" + "\t".join(cells))
    lines.append(f"mean_f1\t{report.mean_f1:.3f}")
    return "\n".join(lines) + "\n"


def agreement_tables(labeled: list[tuple[str, AgreementReport]]) -> str:
    return "\n".join(agreement_table(report, label) for label, report in labeled)


def stats_records(stats: list[AnnotatorStats]) -> str:
    out = []
    for s in stats:
        out.append(
            record_line(
                {
                    "report": "stats",
                    "annotator_id": s.annotator_id,
                    "narrative_count": s.narrative_count,
                    "spans_min": s.spans_min,
                    "spans_max": s.spans_max,
                    "spans_mean": s.spans_mean,
                    "tokens_per_span": s.tokens_per_span,
                    "tokens_per_span_no_punct": s.tokens_per_span_no_punct,
                    "pos_distribution": s.pos_distribution,
                }
            )
        )
    return "".join(out)


def stats_table(stats: list[AnnotatorStats]) -> str:
    lines = [
        "annotator\tnarratives\tspans_min\tspans_max\tspans_mean"
        "\ttokens_per_span\ttokens_per_span_no_punct\tpos_distribution"
    ]
    for s in stats:
        pos = ",".join(f"{tag}={frac:.3f}" for tag, frac in s.pos_distribution.items())
        lines.append(
            f"{s.annotator_id}\t{s.narrative_count}\t{s.spans_min}\t{s.spans_max}"
            f"\t{s.spans_mean:.3f}\t{s.tokens_per_span:.3f}"
            f"\t{s.tokens_per_span_no_punct:.3f}\t{pos}"
        )
    return "\n".join(lines) + "\n"


def sentiment_records(fractions: dict[str, float]) -> str:
    return "".join(
        record_line({"report": "sentiment", "annotator_id": a, "fraction": f})
        for a, f in fractions.items()
    )


def sentiment_table(fractions: dict[str, float]) -> str:
    lines = ["annotator\tsentiment_fraction"]
    for annotator_id, fraction in fractions.items():
        lines.append(f"{annotator_id}\t{fraction:.3f}")
    return "\n".join(lines) + "\n"


def overlaps_records(histogram: list[tuple[str, int]]) -> str:
    return "".join(
        record_line({"report": "overlaps", "key": key, "count": count})
        for key, count in histogram
    )


def overlaps_table(histogram: list[tuple[str, int]]) -> str:
    lines = ["overlap\tcount"]
    for key, count in histogram:
        lines.append(f"{key}\t{count}")
    return "\n".join(lines) + "\n"


def _histogram_record(histogram: FillerHistogram) -> dict:
    return {
        "span_count": histogram.span_count,
        "buckets": {
            str(pos): {
                "count": histogram.bucket_counts[pos],
                "percent": histogram.bucket_percent[pos],
            }
            for pos in sorted(histogram.bucket_counts)
        },
        "inside": {"count": histogram.inside_count, "percent": histogram.inside_percent},
        "none_in_window": {
            "count": histogram.none_count,
            "percent": histogram.none_percent,
        },
    }


def fillers_record(
    carriers: FillerHistogram, baseline: FillerHistogram | None, seed: int | None
) -> dict:
    record = {
        "report": "fillers",
        "window": carriers.window,
        "carriers": _histogram_record(carriers),
    }
    if baseline is not None:
        record["baseline"] = _histogram_record(baseline)
        record["seed"] = seed
    return record


def fillers_records(
    carriers: FillerHistogram, baseline: FillerHistogram | None, seed: int | None
) -> str:
    return record_line(fillers_record(carriers, baseline, seed))


def fillers_table(
    carriers: FillerHistogram, baseline: FillerHistogram | None
) -> str:
    """Plot-ready rows: one line per position, carriers and baseline side by
    side when a baseline is present."""
    header = "position\tcarrier_count\tcarrier_percent"
    if baseline is not None:
        header += "\tbaseline_count\tbaseline_percent"
    lines = [header]

    def row(label: str, count: int, percent: float, b_count, b_percent) -> str:
        line = f"{label}\t{count}\t{percent:.2f}"
        if baseline is not None:
            line += f"\t{b_count}\t{b_percent:.2f}"
        return line

    for pos in sorted(carriers.bucket_counts):
        if pos == 1:
            lines.append(
                row(
                    "inside",
                    carriers.inside_count,
                    carriers.inside_percent,
                    baseline.inside_count if baseline else None,
                    baseline.inside_percent if baseline else None,
                )
            )
        lines.append(
            row(
                f"{pos:+d}",
                carriers.bucket_counts[pos],
                carriers.bucket_percent[pos],
                baseline.bucket_counts[pos] if baseline else None,
                baseline.bucket_percent[pos] if baseline else None,
            )
        )
    lines.append(
        row(
            "none_in_window",
            carriers.none_count,
            carriers.none_percent,
            baseline.none_count if baseline else None,
            baseline.none_percent if baseline else None,
        )
    )
    return "\n".join(lines) + "\n"


def violation_record(violation: Violation) -> dict:
    return {
        "level": violation.level,
        "code": violation.code,
        "message": violation.message,
        "span": (
            {"start": violation.span.start, "end": violation.span.end}
            if violation.span
            else None
        ),
    }


def annotation_record(aset: AnnotationSet, narrative: Narrative | None = None) -> dict:
    spans = []
    for span in aset.spans:
        entry = {"start": span.start, "end": span.end}
        if narrative is not None:
            entry["surface"] = span_surface(narrative, span)
        spans.append(entry)
    return {
        "annotator_id": aset.annotator_id,
        "narrative_id": aset.narrative_id,
        "revision": aset.revision,
        "spans": spans,
    }


def narrative_summary_record(narrative: Narrative, annotated_by: list[str]) -> dict:
    return {
        "id": narrative.id,
        "prompt_polarity": narrative.prompt_polarity,
        "token_count": len(narrative.tokens),
        "annotated_by": annotated_by,
    }


def narrative_record(narrative: Narrative) -> dict:
    return {
        "id": narrative.id,
        "speaker_id": narrative.speaker_id,
        "prompt_polarity": narrative.prompt_polarity,
        "raw_text": narrative.raw_text,
        "valence_pre": narrative.valence_pre,
        "valence_post": narrative.valence_post,
        "arousal_pre": narrative.arousal_pre,
        "arousal_post": narrative.arousal_post,
        "tokens": [
            {
                "index": t.index,
                "surface": t.surface,
                "lower": t.lower,
                "char_start": t.char_start,
                "char_end": t.char_end,
                "is_punct": t.is_punct,
                "is_filler": t.is_filler,
                "lemma": t.lemma,
                "pos": t.pos,
            }
            for t in narrative.tokens
        ],
    }
