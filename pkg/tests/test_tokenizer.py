"""Tokenizer rules: splitting, punctuation shedding, offsets."""

from __future__ import annotations

import unicodedata

from hypothesis import given, strategies as st

from carrierlab import tokenize
from carrierlab.corpus import PUNCT_CHARS


def surfaces(text):
    return [t.surface for t in tokenize(text)]


def test_basic_split_with_trailing_period():
    toks = tokenize("Okay. Ähm also")
    assert [t.surface for t in toks] == ["Okay", ".", "Ähm", "also"]
    assert [t.is_punct for t in toks] == [False, True, False, False]


def test_empty_input():
    assert tokenize("") == []
    assert tokenize("   \n\t ") == []


def test_interior_apostrophe_kept():
    assert surfaces("ging's gut!") == ["ging's", "gut", "!"]


def test_leading_and_trailing_punct_order():
    toks = tokenize('„Na, gut…" sagte sie.')
    assert [t.surface for t in toks] == [
        "„", "Na", ",", "gut", "…", '"', "sagte", "sie", ".",
    ]


def test_all_punct_chunk():
    toks = tokenize("ja ... dann")
    assert [t.surface for t in toks] == ["ja", ".", ".", ".", "dann"]
    assert all(t.is_punct for t in toks[1:4])


def test_offsets_reconstruct_surfaces():
    text = "Ich war, ähm, (sehr) glücklich."
    norm = unicodedata.normalize("NFC", text)
    for token in tokenize(text):
        assert norm[token.char_start : token.char_end] == token.surface


def test_indices_are_sequential():
    toks = tokenize("a b, c! d")
    assert [t.index for t in toks] == list(range(len(toks)))


def test_lower_is_casefolded():
    toks = tokenize("GROSSE Straße")
    assert toks[0].lower == "grosse"
    assert toks[1].lower == "straße".casefold()


def test_nfc_normalization_applied():
    # a + combining diaeresis composes to ä
    decomposed = "ähm"
    toks = tokenize(decomposed)
    assert toks[0].surface == "ähm"


text_strategy = st.text(
    alphabet=st.sampled_from(
        list("abcÄöü ßé") + list(PUNCT_CHARS) + [" ", "\t", "\n"]
    ),
    max_size=40,
)


@given(text_strategy)
def test_round_trip_property(text):
    norm = unicodedata.normalize("NFC", text)
    toks = tokenize(text)
    for token in toks:
        assert norm[token.char_start : token.char_end] == token.surface
        assert token.surface and not any(c.isspace() for c in token.surface)
    # strictly increasing, non-overlapping
    for a, b in zip(toks, toks[1:]):
        assert a.char_end <= b.char_start
    # every non-space character is covered by exactly one token
    covered = sum(t.char_end - t.char_start for t in toks)
    assert covered == sum(1 for c in norm if not c.isspace())


@given(text_strategy)
def test_deterministic_and_idempotent(text):
    first = tokenize(text)
    again = tokenize(text)
    assert [(t.surface, t.char_start) for t in first] == [
        (t.surface, t.char_start) for t in again
    ]
    rejoined = " ".join(t.surface for t in first)
    resplit = tokenize(rejoined)
    assert [t.surface for t in resplit] == [t.surface for t in first]
