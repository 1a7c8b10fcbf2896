"""Shared fixtures: the checked-in corpus and small narrative builders."""

from __future__ import annotations

from pathlib import Path

import pytest

from carrierlab import attach_token_layers, load_corpus
from carrierlab.corpus import Narrative, Token
from carrierlab.store import AnnotationStore

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
NARRATIVES = FIXTURES / "narratives.jsonl"
SIDECAR = FIXTURES / "sidecar.jsonl"
ANNOTATIONS = FIXTURES / "annotations.jsonl"
LEXICONS = sorted((FIXTURES / "lexicons").glob("*.tsv"))
GOLDEN = Path(__file__).resolve().parent / "golden"


def load_fixture_corpus():
    corpus = load_corpus(NARRATIVES, LEXICONS)
    return attach_token_layers(corpus, SIDECAR)


@pytest.fixture(scope="session")
def fixture_corpus():
    return load_fixture_corpus()


@pytest.fixture(scope="session")
def fixture_store(fixture_corpus):
    return AnnotationStore(ANNOTATIONS, fixture_corpus)


def narrative_of(words, narrative_id="t1", lemmas=None, punct=(".", ",", "!", "?")):
    """Toy narrative straight from a word list; offsets are synthetic.

    lemmas maps a lower-cased surface to its lemma; unmapped words keep
    lemma None so token-unit matching is exercised too.
    """
    lemmas = lemmas or {}
    tokens = []
    at = 0
    for i, word in enumerate(words):
        lower = word.casefold()
        tokens.append(
            Token(
                index=i,
                surface=word,
                lower=lower,
                char_start=at,
                char_end=at + len(word),
                is_punct=word in punct,
                lemma=lemmas.get(lower),
            )
        )
        at += len(word) + 1
    return Narrative(
        id=narrative_id,
        speaker_id="s",
        prompt_polarity="positive",
        raw_text=" ".join(words),
        tokens=tokens,
    )


def oracle_tokens(narrative):
    """Engine narrative -> the plain token tuples the oracle consumes."""
    return [(t.lower, t.lemma, t.is_punct) for t in narrative.tokens]
