"""Corpus model: rule tokenizer, narrative records, lexicons, sidecar layers.

Narratives are spoken-transcript text. Tokenization is a deterministic rule
tokenizer (no model dependencies): NFC-normalize, split on whitespace, then
iteratively shed leading/trailing punctuation characters as single-character
tokens. Interior punctuation (as in "ging's") stays inside the token.

Lemma and POS layers are never computed here; they are consumed from a
sidecar file aligned to token order, so the whole corpus stays reproducible
bit for bit.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import (
    AffectScoreOutOfRange,
    DuplicateNarrativeId,
    MalformedRecord,
    TokenCountMismatch,
    UnknownLexiconKind,
    UnknownNarrativeId,
)

# Characters shed from chunk edges as separate one-character tokens.
PUNCT_CHARS = frozenset(".,;:!?()\"'„“”–—-…")

DEFAULT_FILLERS = frozenset({"ähm", "äh", "mhm"})
DEFAULT_CONTENT_POS = frozenset({"NOUN", "VERB", "ADJ", "ADV"})

AFFECT_FIELDS = ("valence_pre", "valence_post", "arousal_pre", "arousal_post")

LEXICON_KINDS = ("fillers", "sentiment", "lemmas", "content_pos")


@dataclass
class Token:
    """One atomic text unit of a narrative."""

    index: int
    surface: str
    lower: str
    char_start: int
    char_end: int
    is_punct: bool = False
    is_filler: bool = False
    lemma: str | None = None
    pos: str | None = None

    def unit(self, use_lemma: bool) -> str:
        """Matching unit: the lemma layer when requested and present, else
        the case-folded surface."""
        if use_lemma and self.lemma is not None:
            return self.lemma
        return self.lower


@dataclass
class Narrative:
    """One spoken personal narrative with its token sequence."""

    id: str
    speaker_id: str
    prompt_polarity: str
    raw_text: str
    tokens: list[Token]
    valence_pre: int | None = None
    valence_post: int | None = None
    arousal_pre: int | None = None
    arousal_post: int | None = None


@dataclass
class Corpus:
    """Narratives plus the lexical resources the analyses draw on."""

    narratives: dict[str, Narrative] = field(default_factory=dict)
    filler_lexicon: frozenset[str] = DEFAULT_FILLERS
    sentiment_lexicon: dict[str, float] = field(default_factory=dict)
    lemma_fallback: dict[str, str] = field(default_factory=dict)
    content_pos_tags: frozenset[str] = DEFAULT_CONTENT_POS


def tokenize(raw_text: str) -> list[Token]:
    """Split NFC-normalized text into tokens with character offsets.

    Whitespace separates chunks; each chunk sheds leading and trailing
    characters from PUNCT_CHARS as individual punctuation tokens, in textual
    order. Offsets refer to the normalized text, so
    normalized[char_start:char_end] == surface for every token.
    """
    text = unicodedata.normalize("NFC", raw_text)
    tokens: list[Token] = []

    def add(surface: str, start: int, end: int, is_punct: bool) -> None:
        tokens.append(
            Token(
                index=len(tokens),
                surface=surface,
                lower=surface.casefold(),
                char_start=start,
                char_end=end,
                is_punct=is_punct,
            )
        )

    pos = 0
    for chunk in text.split():
        start = text.index(chunk, pos)
        end = start + len(chunk)
        pos = end
        while chunk and chunk[0] in PUNCT_CHARS:
            add(chunk[0], start, start + 1, True)
            start += 1
            chunk = chunk[1:]
        trailing: list[tuple[str, int]] = []
        while chunk and chunk[-1] in PUNCT_CHARS:
            end -= 1
            trailing.append((chunk[-1], end))
            chunk = chunk[:-1]
        if chunk:
            add(chunk, start, end, False)
        for ch, at in reversed(trailing):
            add(ch, at, at + 1, True)
    return tokens


def mark_fillers(corpus: Corpus) -> Corpus:
    """Flag tokens whose case-folded surface is in the filler lexicon.

    Punctuation tokens are never flagged, whatever the lexicon contains.
    """
    for narrative in corpus.narratives.values():
        for token in narrative.tokens:
            token.is_filler = (
                not token.is_punct and token.lower in corpus.filler_lexicon
            )
    return corpus


def _parse_affect(record: dict, narrative_id: str) -> dict[str, int | None]:
    scores: dict[str, int | None] = {}
    for name in AFFECT_FIELDS:
        value = record.get(name)
        if value is None:
            scores[name] = None
            continue
        if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 10:
            raise AffectScoreOutOfRange(narrative_id, name, value)
        scores[name] = value
    return scores


def _read_jsonl(path: Path) -> Iterable[tuple[int, dict]]:
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(str(path), line_number, f"bad JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise MalformedRecord(str(path), line_number, "record is not an object")
            yield line_number, record


def load_narratives(path: str | Path) -> dict[str, Narrative]:
    """Read the line-delimited narratives file and tokenize every record."""
    path = Path(path)
    narratives: dict[str, Narrative] = {}
    for line_number, record in _read_jsonl(path):
        try:
            narrative_id = record["id"]
            speaker_id = record["speaker_id"]
            polarity = record["prompt_polarity"]
            raw_text = record["raw_text"]
        except KeyError as exc:
            raise MalformedRecord(
                str(path), line_number, f"missing field {exc.args[0]!r}"
            ) from exc
        if polarity not in ("positive", "negative"):
            raise MalformedRecord(
                str(path), line_number, f"prompt_polarity {polarity!r}"
            )
        if narrative_id in narratives:
            raise DuplicateNarrativeId(narrative_id)
        text = unicodedata.normalize("NFC", raw_text)
        narratives[narrative_id] = Narrative(
            id=narrative_id,
            speaker_id=speaker_id,
            prompt_polarity=polarity,
            raw_text=text,
            tokens=tokenize(text),
            **_parse_affect(record, narrative_id),
        )
    return narratives


def _read_tsv(path: Path, columns: int) -> Iterable[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != columns:
                raise MalformedRecord(
                    str(path), line_number, f"expected {columns} tab-separated fields"
                )
            yield line_number, fields


def load_lexicons(paths: Iterable[str | Path]) -> dict[str, object]:
    """Read lexicon files; the file stem names the lexicon kind.

    fillers: one term per line. sentiment: term<TAB>polarity in [-1, 1].
    lemmas: surface<TAB>lemma (fallback map). content_pos: one POS tag per line.
    """
    loaded: dict[str, object] = {}
    for path in paths:
        path = Path(path)
        kind = path.stem
        if kind not in LEXICON_KINDS:
            raise UnknownLexiconKind(str(path), LEXICON_KINDS)
        if kind == "fillers":
            loaded[kind] = frozenset(
                fields[0].casefold() for _, fields in _read_tsv(path, 1)
            )
        elif kind == "sentiment":
            sentiment: dict[str, float] = {}
            for line_number, fields in _read_tsv(path, 2):
                try:
                    polarity = float(fields[1])
                except ValueError as exc:
                    raise MalformedRecord(
                        str(path), line_number, f"polarity {fields[1]!r}"
                    ) from exc
                if not -1.0 <= polarity <= 1.0:
                    raise MalformedRecord(
                        str(path), line_number, f"polarity {polarity} outside [-1, 1]"
                    )
                sentiment[fields[0].casefold()] = polarity
            loaded[kind] = sentiment
        elif kind == "lemmas":
            loaded[kind] = {
                fields[0].casefold(): fields[1].casefold()
                for _, fields in _read_tsv(path, 2)
            }
        else:
            loaded[kind] = frozenset(fields[0] for _, fields in _read_tsv(path, 1))
    return loaded


def load_corpus(
    narratives_path: str | Path, lexicon_paths: Iterable[str | Path] = ()
) -> Corpus:
    """Build a fully tokenized corpus with fillers marked."""
    lexicons = load_lexicons(lexicon_paths)
    corpus = Corpus(
        narratives=load_narratives(narratives_path),
        filler_lexicon=lexicons.get("fillers", DEFAULT_FILLERS),
        sentiment_lexicon=lexicons.get("sentiment", {}),
        lemma_fallback=lexicons.get("lemmas", {}),
        content_pos_tags=lexicons.get("content_pos", DEFAULT_CONTENT_POS),
    )
    return mark_fillers(corpus)


def attach_token_layers(corpus: Corpus, sidecar_path: str | Path) -> Corpus:
    """Populate lemma/pos from a sidecar aligned to token order.

    A missing or null sidecar lemma falls back to the corpus lemma map,
    then to the case-folded surface. Token count, order and surfaces are
    never touched.
    """
    path = Path(sidecar_path)
    for line_number, record in _read_jsonl(path):
        try:
            narrative_id = record["narrative_id"]
            layers = record["layers"]
        except KeyError as exc:
            raise MalformedRecord(
                str(path), line_number, f"missing field {exc.args[0]!r}"
            ) from exc
        narrative = corpus.narratives.get(narrative_id)
        if narrative is None:
            raise UnknownNarrativeId(narrative_id)
        if len(layers) != len(narrative.tokens):
            raise TokenCountMismatch(narrative_id, len(narrative.tokens), len(layers))
        for token, layer in zip(narrative.tokens, layers):
            lemma = layer.get("lemma")
            if lemma is None:
                lemma = corpus.lemma_fallback.get(token.lower, token.lower)
            token.lemma = lemma.casefold()
            token.pos = layer.get("pos")
    return corpus
