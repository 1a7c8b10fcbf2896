"""Exception types shared across the workbench."""

from __future__ import annotations


class CarrierLabError(Exception):
    """Base class for all workbench errors."""


class MalformedRecord(CarrierLabError):
    def __init__(self, path: str, line_number: int, reason: str):
        super().__init__(f"{path}:{line_number}: {reason}")
        self.path = path
        self.line_number = line_number
        self.reason = reason


class DuplicateNarrativeId(CarrierLabError):
    def __init__(self, narrative_id: str):
        super().__init__(f"duplicate narrative id {narrative_id!r}")
        self.narrative_id = narrative_id


class AffectScoreOutOfRange(CarrierLabError):
    def __init__(self, narrative_id: str, field: str, value):
        super().__init__(
            f"narrative {narrative_id!r}: {field}={value!r} outside 1..10"
        )
        self.narrative_id = narrative_id
        self.field = field
        self.value = value


class UnknownNarrativeId(CarrierLabError):
    def __init__(self, narrative_id: str):
        super().__init__(f"unknown narrative id {narrative_id!r}")
        self.narrative_id = narrative_id


class TokenCountMismatch(CarrierLabError):
    def __init__(self, narrative_id: str, expected: int, found: int):
        super().__init__(
            f"narrative {narrative_id!r}: sidecar has {found} layers "
            f"for {expected} tokens"
        )
        self.narrative_id = narrative_id
        self.expected = expected
        self.found = found


class UnknownLexiconKind(CarrierLabError):
    def __init__(self, path: str, known: tuple[str, ...]):
        super().__init__(
            f"cannot tell lexicon kind of {path!r}; file stem must be one of {known}"
        )
        self.path = path


class SpanOutOfBounds(CarrierLabError):
    def __init__(self, start: int, end: int, token_count: int):
        super().__init__(
            f"span [{start}, {end}) invalid for narrative with {token_count} tokens"
        )
        self.start = start
        self.end = end
        self.token_count = token_count


class NarrativeMismatch(CarrierLabError):
    def __init__(self, set_narrative_id: str, narrative_id: str):
        super().__init__(
            f"annotation set targets {set_narrative_id!r}, narrative is {narrative_id!r}"
        )
        self.set_narrative_id = set_narrative_id
        self.narrative_id = narrative_id


class StaleRevision(CarrierLabError):
    def __init__(self, stored: int, expected: int):
        super().__init__(f"stored revision is {stored}, caller expected {expected}")
        self.stored = stored
        self.expected = expected


class ValidationError(CarrierLabError):
    """Raised when an annotation set carries error-level violations."""

    def __init__(self, violations):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = list(violations)


class InsufficientAnnotators(CarrierLabError):
    def __init__(self):
        super().__init__("need at least two annotators sharing a narrative")


class EmptyStore(CarrierLabError):
    def __init__(self):
        super().__init__("annotation store holds no entries")


class MissingLexicon(CarrierLabError):
    def __init__(self, kind: str):
        super().__init__(f"no {kind} lexicon loaded")
        self.kind = kind


class InsufficientContentTokens(CarrierLabError):
    def __init__(self, narrative_id: str, requested: int, available: int):
        super().__init__(
            f"narrative {narrative_id!r}: {requested} samples requested, "
            f"only {available} content tokens available"
        )
        self.narrative_id = narrative_id
        self.requested = requested
        self.available = available


class CorpusLoadFailure(CarrierLabError):
    def __init__(self, reason: str):
        super().__init__(reason)


class BindFailure(CarrierLabError):
    def __init__(self, bind: str, reason: str):
        super().__init__(f"cannot bind {bind}: {reason}")
        self.bind = bind
