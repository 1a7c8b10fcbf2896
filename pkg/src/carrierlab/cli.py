"""Command-line access to every engine capability.

Human-readable tables by default; --format records switches to the same
line-delimited JSON the HTTP service serves, byte for byte. Exit codes:
0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analysis, render
from .agreement import (
    Aggregation,
    Convention,
    MatchKind,
    MatchStrategy,
    Position,
    STRATEGY_LATTICE,
    Unit,
    pairwise_report,
)
from .annotation import validate_annotation_set
from .corpus import Corpus, attach_token_layers, load_corpus
from .errors import CarrierLabError, CorpusLoadFailure
from .store import AnnotationStore


def _lexicon_paths(lexicons_dir: str | None) -> list[Path]:
    if lexicons_dir is None:
        return []
    return sorted(Path(lexicons_dir).glob("*.tsv"))


def _corpus_from(args) -> Corpus:
    try:
        corpus = load_corpus(args.corpus, _lexicon_paths(args.lexicons))
        if args.sidecar:
            attach_token_layers(corpus, args.sidecar)
    except OSError as exc:
        raise CorpusLoadFailure(str(exc)) from exc
    return corpus


def _store_from(args, corpus: Corpus) -> AnnotationStore:
    return AnnotationStore(args.store, corpus)


def _emit(args, records: str, table: str) -> None:
    sys.stdout.write(records if args.format == "records" else table)


def cmd_ingest(args) -> int:
    corpus = _corpus_from(args)
    if args.format == "records":
        for _, narrative in sorted(corpus.narratives.items()):
            sys.stdout.write(
                render.record_line(
                    {
                        "report": "ingest",
                        "id": narrative.id,
                        "prompt_polarity": narrative.prompt_polarity,
                        "token_count": len(narrative.tokens),
                        "filler_count": sum(1 for t in narrative.tokens if t.is_filler),
                    }
                )
            )
        return 0
    lines = ["id\tpolarity\ttokens\tfillers"]
    for _, n in sorted(corpus.narratives.items()):
        fillers = sum(1 for t in n.tokens if t.is_filler)
        lines.append(f"{n.id}\t{n.prompt_polarity}\t{len(n.tokens)}\t{fillers}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_validate(args) -> int:
    corpus = _corpus_from(args)
    store = AnnotationStore(args.store)
    saw_error = False
    out: list[str] = []
    records: list[str] = []
    for aset in sorted(store.all_sets(), key=lambda s: (s.annotator_id, s.narrative_id)):
        narrative = corpus.narratives.get(aset.narrative_id)
        if narrative is None:
            saw_error = True
            out.append(f"{aset.annotator_id}\t{aset.narrative_id}\tERROR\tUnknownNarrativeId\t-")
            records.append(
                render.record_line(
                    {
                        "report": "validate",
                        "annotator_id": aset.annotator_id,
                        "narrative_id": aset.narrative_id,
                        "level": "ERROR",
                        "code": "UnknownNarrativeId",
                        "message": f"unknown narrative {aset.narrative_id!r}",
                        "span": None,
                    }
                )
            )
            continue
        for violation in validate_annotation_set(aset, narrative):
            saw_error = saw_error or violation.level == "ERROR"
            out.append(
                f"{aset.annotator_id}\t{aset.narrative_id}"
                f"\t{violation.level}\t{violation.code}\t{violation.message}"
            )
            records.append(
                render.record_line(
                    {
                        "report": "validate",
                        "annotator_id": aset.annotator_id,
                        "narrative_id": aset.narrative_id,
                        **render.violation_record(violation),
                    }
                )
            )
    if args.format == "records":
        sys.stdout.write("".join(records))
    else:
        header = "annotator\tnarrative\tlevel\tcode\tmessage"
        sys.stdout.write("\n".join([header, *out]) + "\n" if out else header + "\n")
    return 1 if saw_error else 0


def cmd_agreement(args) -> int:
    corpus = _corpus_from(args)
    store = _store_from(args, corpus)
    aggregation = Aggregation(args.aggregation)
    if args.all_strategies:
        labeled = [
            (label, pairwise_report(corpus, store, strategy, aggregation))
            for label, strategy in STRATEGY_LATTICE
        ]
        _emit(
            args,
            render.agreement_records([report for _, report in labeled]),
            render.agreement_tables(labeled),
        )
        return 0
    strategy = MatchStrategy(
        match_kind=MatchKind(args.match),
        position=Position(args.position),
        unit=Unit(args.unit),
        ignore_punct=args.ignore_punct,
        precision_convention=Convention(args.convention),
        cap_coverage=not args.uncapped,
    )
    report = pairwise_report(corpus, store, strategy, aggregation)
    _emit(args, render.agreement_records([report]), render.agreement_table(report))
    return 0


def cmd_stats(args) -> int:
    corpus = _corpus_from(args)
    store = _store_from(args, corpus)
    stats = analysis.annotation_stats(corpus, store)
    _emit(args, render.stats_records(stats), render.stats_table(stats))
    return 0


def cmd_sentiment(args) -> int:
    corpus = _corpus_from(args)
    store = _store_from(args, corpus)
    fractions = analysis.sentiment_fraction(corpus, store)
    _emit(args, render.sentiment_records(fractions), render.sentiment_table(fractions))
    return 0


def cmd_overlaps(args) -> int:
    corpus = _corpus_from(args)
    store = _store_from(args, corpus)
    strategy = MatchStrategy(
        MatchKind.PARTIAL,
        Position(args.position),
        Unit(args.unit),
        ignore_punct=args.ignore_punct,
    )
    histogram = analysis.overlap_histogram(corpus, store, strategy)
    _emit(args, render.overlaps_records(histogram), render.overlaps_table(histogram))
    return 0


def cmd_fillers(args) -> int:
    corpus = _corpus_from(args)
    store = _store_from(args, corpus)
    spans = analysis.carrier_spans(store)
    carriers = analysis.filler_position_histogram(
        corpus, spans, args.window, args.skip_punct_distance
    )
    baseline = None
    if not args.no_baseline and spans:
        sampled = analysis.random_content_baseline(
            corpus, analysis.default_baseline_counts(store), args.seed
        )
        baseline = analysis.filler_position_histogram(
            corpus, sampled, args.window, args.skip_punct_distance
        )
    _emit(
        args,
        render.fillers_records(carriers, baseline, args.seed),
        render.fillers_table(carriers, baseline),
    )
    return 0


def cmd_export(args) -> int:
    corpus = _corpus_from(args)
    store = _store_from(args, corpus)
    for aset in sorted(store.all_sets(), key=lambda s: (s.annotator_id, s.narrative_id)):
        sys.stdout.write(render.record_line(render.annotation_record(aset)))
    return 0


def cmd_serve(args) -> int:
    from .service import ServiceConfig, serve

    tokens: dict[str, str] = {}
    if args.tokens:
        import json

        tokens = json.loads(Path(args.tokens).read_text(encoding="utf-8"))
    serve(
        ServiceConfig(
            corpus_path=args.corpus,
            store_path=args.store,
            sidecar_path=args.sidecar,
            lexicon_paths=[str(p) for p in _lexicon_paths(args.lexicons)],
            bind=args.bind,
            seed=args.seed,
            annotator_tokens=tokens,
            compact_on_start=not args.no_compact,
        )
    )
    return 0


def _add_common(parser: argparse.ArgumentParser, store: bool = False) -> None:
    parser.add_argument("--corpus", required=True, help="narratives file (JSONL)")
    parser.add_argument("--sidecar", help="lemma/POS sidecar file (JSONL)")
    parser.add_argument("--lexicons", help="directory of lexicon TSV files")
    parser.add_argument(
        "--format", choices=("table", "records"), default="table",
        help="human table or line-delimited JSON",
    )
    if store:
        parser.add_argument("--store", required=True, help="annotation log file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carrierlab",
        description="Span-annotation workbench: agreement metrics and corpus reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load and summarize a corpus")
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="check stored annotations against the guidelines")
    _add_common(p, store=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("agreement", help="pairwise inter-annotator agreement")
    _add_common(p, store=True)
    p.add_argument("--match", choices=[k.value for k in MatchKind], default="partial")
    p.add_argument("--position", choices=[k.value for k in Position], default="agnostic")
    p.add_argument("--unit", choices=[k.value for k in Unit], default="token")
    p.add_argument("--ignore-punct", action="store_true")
    p.add_argument(
        "--convention",
        choices=[k.value for k in Convention],
        default=Convention.HYPOTHESIS_COVERED.value,
    )
    p.add_argument("--uncapped", action="store_true", help="do not cap per-span coverage at 1")
    p.add_argument("--aggregation", choices=[k.value for k in Aggregation], default="micro")
    p.add_argument(
        "--all-strategies", action="store_true",
        help="emit the four standard configurations in one report",
    )
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("stats", help="per-annotator span statistics")
    _add_common(p, store=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sentiment", help="fraction of spans with sentiment-bearing words")
    _add_common(p, store=True)
    p.set_defaults(func=cmd_sentiment)

    p = sub.add_parser("overlaps", help="histogram of span fragments annotators share")
    _add_common(p, store=True)
    p.add_argument("--position", choices=[k.value for k in Position], default="agnostic")
    p.add_argument("--unit", choices=[k.value for k in Unit], default="token")
    p.add_argument("--ignore-punct", action="store_true")
    p.set_defaults(func=cmd_overlaps)

    p = sub.add_parser("fillers", help="filler positions around spans vs random baseline")
    _add_common(p, store=True)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-baseline", action="store_true")
    p.add_argument(
        "--skip-punct-distance", action="store_true",
        help="count only non-punctuation tokens as distance",
    )
    p.set_defaults(func=cmd_fillers)

    p = sub.add_parser("export", help="write compacted annotations as line-delimited JSON")
    _add_common(p, store=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    _add_common(p, store=True)
    p.add_argument("--bind", default="127.0.0.1:8767")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tokens", help="JSON file mapping annotator id to access token")
    p.add_argument("--no-compact", action="store_true", help="skip startup log compaction")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CarrierLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
