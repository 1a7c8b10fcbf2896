"""Durable annotation store backed by an append-only record log.

Every upsert appends one line; replay keeps the highest revision per
(annotator, narrative) key. Recovery tolerates exactly one kind of damage,
the torn final record (interrupted append): a last line that is incomplete
or unparseable is dropped and remembered in `torn_record`. Damage anywhere
else is corruption, not a crash artifact, and raises.

Writes are serialized under one lock; reads come from the in-memory view,
so a finished upsert is immediately visible.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from .annotation import AnnotationSet, Span, has_errors, validate_annotation_set
from .corpus import Corpus
from .errors import (
    MalformedRecord,
    StaleRevision,
    UnknownNarrativeId,
    ValidationError,
)


def _record_of(aset: AnnotationSet) -> dict:
    return {
        "annotator_id": aset.annotator_id,
        "narrative_id": aset.narrative_id,
        "revision": aset.revision,
        "spans": [{"start": s.start, "end": s.end} for s in aset.spans],
    }


def _set_of(record: dict) -> AnnotationSet:
    return AnnotationSet(
        annotator_id=record["annotator_id"],
        narrative_id=record["narrative_id"],
        revision=record["revision"],
        spans=[Span(s["start"], s["end"]) for s in record["spans"]],
    )


class AnnotationStore:
    """Log-backed map (annotator_id, narrative_id) -> AnnotationSet."""

    def __init__(self, path: str | Path, corpus: Corpus | None = None):
        self.path = Path(path)
        self.corpus = corpus
        self.torn_record: str | None = None
        self._lock = threading.Lock()
        self._entries: dict[tuple[str, str], AnnotationSet] = {}
        self._replay()

    def _replay(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as handle:
            lines = handle.readlines()
        for number, line in enumerate(lines, start=1):
            final = number == len(lines)
            if not line.strip():
                continue
            torn = not line.endswith("\n")
            record = None
            if not torn:
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    torn = True
            if torn:
                if final:
                    self.torn_record = line
                    continue
                raise MalformedRecord(str(self.path), number, "corrupt record")
            if not isinstance(record, dict):
                raise MalformedRecord(str(self.path), number, "record is not an object")
            try:
                aset = _set_of(record)
            except (KeyError, TypeError, ValueError) as exc:
                raise MalformedRecord(str(self.path), number, str(exc)) from exc
            key = (aset.annotator_id, aset.narrative_id)
            current = self._entries.get(key)
            if current is None or aset.revision >= current.revision:
                self._entries[key] = aset

    def _append(self, aset: AnnotationSet) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        line = json.dumps(_record_of(aset), ensure_ascii=False) + "\n"
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(line)
            handle.flush()
            os.fsync(handle.fileno())

    def get(self, annotator_id: str, narrative_id: str) -> AnnotationSet | None:
        with self._lock:
            return self._entries.get((annotator_id, narrative_id))

    def all_sets(self) -> list[AnnotationSet]:
        with self._lock:
            return list(self._entries.values())

    def annotator_ids(self) -> list[str]:
        with self._lock:
            return sorted({key[0] for key in self._entries})

    def annotators_of(self, narrative_id: str) -> list[str]:
        with self._lock:
            return sorted(a for a, n in self._entries if n == narrative_id)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def upsert(self, aset: AnnotationSet, expected_revision: int) -> int:
        """Store the set if expected_revision matches; returns the new revision.

        Validates against the attached corpus first: structural errors raise
        ValidationError, an unknown narrative raises UnknownNarrativeId.
        """
        if self.corpus is not None:
            narrative = self.corpus.narratives.get(aset.narrative_id)
            if narrative is None:
                raise UnknownNarrativeId(aset.narrative_id)
            violations = validate_annotation_set(aset, narrative)
            if has_errors(violations):
                raise ValidationError([v for v in violations if v.level == "ERROR"])
        key = (aset.annotator_id, aset.narrative_id)
        with self._lock:
            current = self._entries.get(key)
            stored_revision = current.revision if current else 0
            if stored_revision != expected_revision:
                raise StaleRevision(stored_revision, expected_revision)
            committed = AnnotationSet(
                annotator_id=aset.annotator_id,
                narrative_id=aset.narrative_id,
                spans=list(aset.spans),
                revision=expected_revision + 1,
            )
            self._append(committed)
            self._entries[key] = committed
            return committed.revision

    def compact(self) -> None:
        """Rewrite the log with only the live records, dropping history and
        any torn tail. Safe: writes a sibling file, then replaces."""
        with self._lock:
            tmp = self.path.with_suffix(self.path.suffix + ".compact")
            with open(tmp, "w", encoding="utf-8") as handle:
                for key in sorted(self._entries):
                    handle.write(
                        json.dumps(_record_of(self._entries[key]), ensure_ascii=False)
                        + "\n"
                    )
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, self.path)
            self.torn_record = None
