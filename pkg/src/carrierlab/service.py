"""HTTP front end: corpus browsing, annotation persistence, reports.

One process serves everything the web UI and scripts need. The corpus is
immutable after startup; annotation writes go through the store's revision
protocol. Report endpoints return the same line-delimited records the CLI
emits, byte for byte, so scripted consumers can treat both as one source.
"""

from __future__ import annotations

import socket
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Header, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

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
from .annotation import AnnotationSet, Span, validate_annotation_set
from .corpus import Corpus, attach_token_layers, load_corpus
from .errors import (
    BindFailure,
    CarrierLabError,
    CorpusLoadFailure,
    EmptyStore,
    InsufficientAnnotators,
    MissingLexicon,
    StaleRevision,
    ValidationError,
)
from .store import AnnotationStore

NDJSON = "application/x-ndjson"


@dataclass
class ServiceConfig:
    corpus_path: str
    store_path: str
    sidecar_path: str | None = None
    lexicon_paths: list[str] = field(default_factory=list)
    bind: str = "127.0.0.1:8767"
    seed: int = 0
    annotator_tokens: dict[str, str] = field(default_factory=dict)
    compact_on_start: bool = True


@dataclass
class ApiSession:
    annotator_id: str
    issued_at: float
    token: str


class SpanBody(BaseModel):
    start: int
    end: int


class AnnotationBody(BaseModel):
    spans: list[SpanBody]
    expected_revision: int = 0


def _load(config: ServiceConfig) -> Corpus:
    try:
        corpus = load_corpus(config.corpus_path, config.lexicon_paths)
        if config.sidecar_path:
            attach_token_layers(corpus, config.sidecar_path)
        return corpus
    except OSError as exc:
        raise CorpusLoadFailure(str(exc)) from exc
    except CarrierLabError as exc:
        raise CorpusLoadFailure(str(exc)) from exc


def build_app(config: ServiceConfig) -> FastAPI:
    corpus = _load(config)
    store = AnnotationStore(config.store_path, corpus)
    if config.compact_on_start and (store.torn_record is not None or len(store)):
        store.compact()

    sessions = {
        token: ApiSession(annotator_id, time.time(), token)
        for annotator_id, token in config.annotator_tokens.items()
    }

    app = FastAPI(title="carrierlab")
    app.state.store = store
    app.state.corpus = corpus
    # the annotation UI is served from another origin (file:// or a static host)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def error(status: int, code: str, **extra) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": code, **extra})

    @app.get("/narratives")
    def list_narratives():
        return [
            render.narrative_summary_record(n, store.annotators_of(n.id))
            for _, n in sorted(corpus.narratives.items())
        ]

    @app.get("/narratives/{narrative_id}")
    def get_narrative(narrative_id: str):
        narrative = corpus.narratives.get(narrative_id)
        if narrative is None:
            return error(404, "UnknownNarrativeId", narrative_id=narrative_id)
        return render.narrative_record(narrative)

    @app.get("/annotations/{annotator_id}/{narrative_id}")
    def get_annotation(annotator_id: str, narrative_id: str):
        narrative = corpus.narratives.get(narrative_id)
        if narrative is None:
            return error(404, "UnknownNarrativeId", narrative_id=narrative_id)
        aset = store.get(annotator_id, narrative_id)
        if aset is None:
            return error(404, "NotFound", annotator_id=annotator_id, narrative_id=narrative_id)
        return render.annotation_record(aset, narrative)

    @app.put("/annotations/{annotator_id}/{narrative_id}")
    def put_annotation(
        annotator_id: str,
        narrative_id: str,
        body: AnnotationBody,
        x_annotator_token: str | None = Header(default=None),
    ):
        if sessions:
            session = sessions.get(x_annotator_token or "")
            if session is None or session.annotator_id != annotator_id:
                return error(401, "Unauthorized")
        narrative = corpus.narratives.get(narrative_id)
        if narrative is None:
            return error(404, "UnknownNarrativeId", narrative_id=narrative_id)
        spans = []
        for s in body.spans:
            if not 0 <= s.start < s.end:
                return error(
                    422,
                    "ValidationError",
                    violations=[
                        {
                            "level": "ERROR",
                            "code": "InvalidSpan",
                            "message": f"bad span [{s.start}, {s.end})",
                            "span": {"start": s.start, "end": s.end},
                        }
                    ],
                )
            spans.append(Span(s.start, s.end))
        aset = AnnotationSet(annotator_id, narrative_id, spans)
        try:
            revision = store.upsert(aset, body.expected_revision)
        except StaleRevision as exc:
            return error(409, "StaleRevision", stored=exc.stored, expected=exc.expected)
        except ValidationError as exc:
            return error(
                422,
                "ValidationError",
                violations=[render.violation_record(v) for v in exc.violations],
            )
        warnings = [
            render.violation_record(v)
            for v in validate_annotation_set(aset, narrative)
            if v.level == "WARNING"
        ]
        return {"revision": revision, "warnings": warnings}

    @app.get("/reports/agreement")
    def report_agreement(
        match: MatchKind = Query(default=MatchKind.PARTIAL),
        position: Position = Query(default=Position.AGNOSTIC),
        unit: Unit = Query(default=Unit.TOKEN),
        aggregation: Aggregation = Query(default=Aggregation.MICRO),
        ignore_punct: bool = Query(default=False),
        convention: Convention = Query(default=Convention.HYPOTHESIS_COVERED),
        cap: bool = Query(default=True),
        all_strategies: bool = Query(default=False),
    ):
        try:
            if all_strategies:
                reports = [
                    pairwise_report(corpus, store, strategy, aggregation)
                    for _, strategy in STRATEGY_LATTICE
                ]
                return PlainTextResponse(
                    render.agreement_records(reports), media_type=NDJSON
                )
            strategy = MatchStrategy(
                match_kind=match,
                position=position,
                unit=unit,
                ignore_punct=ignore_punct,
                precision_convention=convention,
                cap_coverage=cap,
            )
            report = pairwise_report(corpus, store, strategy, aggregation)
        except InsufficientAnnotators as exc:
            return error(409, "InsufficientAnnotators", detail=str(exc))
        return PlainTextResponse(
            render.agreement_records([report]), media_type=NDJSON
        )

    @app.get("/reports/stats")
    def report_stats():
        try:
            stats = analysis.annotation_stats(corpus, store)
        except EmptyStore as exc:
            return error(409, "EmptyStore", detail=str(exc))
        return PlainTextResponse(render.stats_records(stats), media_type=NDJSON)

    @app.get("/reports/sentiment")
    def report_sentiment():
        try:
            fractions = analysis.sentiment_fraction(corpus, store)
        except MissingLexicon as exc:
            return error(409, "MissingLexicon", detail=str(exc))
        return PlainTextResponse(render.sentiment_records(fractions), media_type=NDJSON)

    @app.get("/reports/overlaps")
    def report_overlaps(
        position: Position = Query(default=Position.AGNOSTIC),
        unit: Unit = Query(default=Unit.TOKEN),
        ignore_punct: bool = Query(default=False),
    ):
        strategy = MatchStrategy(
            MatchKind.PARTIAL, position, unit, ignore_punct=ignore_punct
        )
        histogram = analysis.overlap_histogram(corpus, store, strategy)
        return PlainTextResponse(render.overlaps_records(histogram), media_type=NDJSON)

    @app.get("/reports/fillers")
    def report_fillers(
        window: int = Query(default=5, ge=1),
        baseline: bool = Query(default=True),
        seed: int | None = Query(default=None),
        skip_punct_distance: bool = Query(default=False),
    ):
        spans = analysis.carrier_spans(store)
        carriers = analysis.filler_position_histogram(
            corpus, spans, window, skip_punct_distance
        )
        baseline_histogram = None
        used_seed = config.seed if seed is None else seed
        if baseline and spans:
            sampled = analysis.random_content_baseline(
                corpus, analysis.default_baseline_counts(store), used_seed
            )
            baseline_histogram = analysis.filler_position_histogram(
                corpus, sampled, window, skip_punct_distance
            )
        return PlainTextResponse(
            render.fillers_records(carriers, baseline_histogram, used_seed),
            media_type=NDJSON,
        )

    return app


def serve(config: ServiceConfig) -> None:
    """Blocking entry point: bind, then run until interrupted."""
    import uvicorn

    host, _, port_text = config.bind.rpartition(":")
    host = host or "127.0.0.1"
    try:
        port = int(port_text)
    except ValueError as exc:
        raise BindFailure(config.bind, "port is not a number") from exc
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise BindFailure(config.bind, str(exc)) from exc
    finally:
        probe.close()

    app = build_app(config)
    uvicorn.run(app, host=host, port=port, log_level="warning")
