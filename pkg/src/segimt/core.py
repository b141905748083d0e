"""Core value types: token sequences, validated segments, feedback,
hypotheses, and effort tallies.

Everything here is an immutable value; instances are safe to share across
threads and sessions. Tokens are whitespace-delimited strings with
punctuation attached to words; ``</s>`` and ``<unk>`` are reserved and only
appear where an operation documents them.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

EOS = "</s>"
UNK = "<unk>"
BOS = "<s>"  # virtual LM start context, never emitted


class Side(enum.Enum):
    SOURCE = "source"
    TARGET = "target"


class SegmentKind(enum.Enum):
    VALIDATED = "validated"
    CORRECTION = "correction"


class Provenance(enum.Enum):
    FORCED = "forced"
    GENERATED = "generated"


def _check_token(token: str) -> None:
    if not token:
        raise ValueError("empty token")
    if any(ch.isspace() for ch in token):
        raise ValueError(f"token contains whitespace: {token!r}")


@dataclass(frozen=True, slots=True)
class TokenSeq:
    """An ordered sequence of tokens on one language side.

    Behaves as a ``Sequence[str]`` so it can be passed anywhere plain token
    lists are accepted.
    """

    tokens: tuple[str, ...]
    side: Side = Side.TARGET

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        for tok in self.tokens:
            _check_token(tok)

    @classmethod
    def from_text(cls, text: str, side: Side = Side.TARGET) -> "TokenSeq":
        """Whitespace-tokenize ``text`` (NFC-normalized) into a sequence."""
        return cls(tuple(unicodedata.normalize("NFC", text).split()), side)

    def text(self) -> str:
        return " ".join(self.tokens)

    def char_count(self) -> int:
        """Characters in the rendered sentence: word characters plus one
        separating space between adjacent words (no trailing space)."""
        if not self.tokens:
            return 0
        return sum(len(t) for t in self.tokens) + len(self.tokens) - 1

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return self.tokens[item]
        return self.tokens[item]


Tokens = Union[TokenSeq, Sequence[str]]


def token_tuple(tokens: Tokens) -> tuple[str, ...]:
    """Coerce a TokenSeq or plain sequence to a token tuple."""
    if isinstance(tokens, TokenSeq):
        return tokens.tokens
    return tuple(tokens)


@dataclass(frozen=True, slots=True)
class ValidatedSegment:
    """A contiguous run of target words the user marked as correct.

    ``kind`` distinguishes plain validated runs from the single-word
    correction. ``ref_span`` is the (start, end) pair of 0-based inclusive
    reference indices the segment covers; only simulated sessions carry it.
    """

    words: tuple[str, ...]
    kind: SegmentKind = SegmentKind.VALIDATED
    ref_span: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(self.words))
        if self.ref_span is not None:
            object.__setattr__(self, "ref_span", tuple(self.ref_span))

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True, slots=True)
class Feedback:
    """The ordered, non-overlapping segments one review round produced."""

    segments: tuple[ValidatedSegment, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def n(self) -> int:
        return len(self.segments)

    def correction(self) -> Optional[ValidatedSegment]:
        for seg in self.segments:
            if seg.kind is SegmentKind.CORRECTION:
                return seg
        return None

    def covered_indices(self) -> set[int]:
        """Reference indices covered by segments carrying ref_spans."""
        covered: set[int] = set()
        for seg in self.segments:
            if seg.ref_span is not None:
                covered.update(range(seg.ref_span[0], seg.ref_span[1] + 1))
        return covered


def validate_feedback(feedback: Feedback) -> Optional[str]:
    """Return a description of the first violated invariant, or None if ok.

    Checked in order: segment well-formedness (non-empty, legal tokens, no
    end-of-sequence marker, one-word corrections), at most one correction,
    then ref_span consistency (length match, strictly increasing, disjoint).
    """
    corrections = 0
    for seg in feedback.segments:
        if len(seg.words) == 0:
            return "empty segment"
        for word in seg.words:
            if not word or any(ch.isspace() for ch in word):
                return f"invalid token in segment: {word!r}"
            if word == EOS:
                return f"reserved token {EOS} not allowed in a segment"
        if seg.kind is SegmentKind.CORRECTION:
            corrections += 1
            if len(seg.words) != 1:
                return "correction segment must be exactly one word"
    if corrections > 1:
        return "multiple correction segments"
    prev_end = -1
    for seg in feedback.segments:
        if seg.ref_span is None:
            continue
        start, end = seg.ref_span
        if start < 0 or end < start:
            return f"malformed ref_span {seg.ref_span}"
        if end - start + 1 != len(seg.words):
            return f"ref_span {seg.ref_span} does not match segment length {len(seg.words)}"
        if start <= prev_end:
            return "overlap: ref_spans must be strictly increasing and disjoint"
        prev_end = end
    return None


def require_valid_feedback(feedback: Feedback) -> None:
    violation = validate_feedback(feedback)
    if violation is not None:
        raise ValueError(f"invalid feedback: {violation}")


@dataclass(frozen=True, slots=True)
class GapSlot:
    """A machine-filled position in the composed hypothesis skeleton."""

    index: int


@dataclass(frozen=True, slots=True)
class ForcedSlot:
    """A user-validated segment reproduced verbatim in the skeleton."""

    segment: ValidatedSegment


Slot = Union[GapSlot, ForcedSlot]


def compose_skeleton(feedback: Feedback) -> list[Slot]:
    """Alternate gap and forced slots around the feedback segments.

    For N segments the result is [gap_0, f_1, gap_1, ..., f_N, gap_N]:
    exactly N forced slots in feedback order and N+1 gaps. The leading gap
    exists structurally even when it will be filled with zero tokens.
    """
    slots: list[Slot] = [GapSlot(0)]
    for i, seg in enumerate(feedback.segments):
        slots.append(ForcedSlot(seg))
        slots.append(GapSlot(i + 1))
    return slots


@dataclass(frozen=True, slots=True)
class Hypothesis:
    """A target sentence plus per-token log-probabilities and provenance."""

    tokens: TokenSeq
    token_logprobs: tuple[float, ...]
    provenance: tuple[Provenance, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "token_logprobs", tuple(self.token_logprobs))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        n = len(self.tokens)
        if len(self.token_logprobs) != n or len(self.provenance) != n:
            raise ValueError(
                f"hypothesis fields disagree on length: {n} tokens, "
                f"{len(self.token_logprobs)} logprobs, {len(self.provenance)} provenance"
            )
        for lp in self.token_logprobs:
            if lp > 0.0:
                raise ValueError(f"token log-probability above 0: {lp}")

    @classmethod
    def empty(cls) -> "Hypothesis":
        return cls(TokenSeq((), Side.TARGET), (), ())

    def forced_count(self) -> int:
        return sum(1 for p in self.provenance if p is Provenance.FORCED)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True, slots=True)
class EffortTally:
    """Accumulated user effort: words typed, characters typed, mouse acts."""

    word_strokes: int = 0
    key_strokes: int = 0
    mouse_actions: int = 0

    def __post_init__(self) -> None:
        for name in ("word_strokes", "key_strokes", "mouse_actions"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.key_strokes > 0 and self.word_strokes > self.key_strokes:
            raise ValueError("more word strokes than key strokes")

    def add(self, other: "EffortTally") -> "EffortTally":
        return EffortTally(
            self.word_strokes + other.word_strokes,
            self.key_strokes + other.key_strokes,
            self.mouse_actions + other.mouse_actions,
        )

    def as_dict(self) -> dict[str, int]:
        return {"ws": self.word_strokes, "ks": self.key_strokes, "ma": self.mouse_actions}
