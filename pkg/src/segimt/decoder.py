"""Greedy decoding, unconstrained and feedback-constrained.

Constrained decoding composes the output as alternating machine-filled gaps
and verbatim user segments. Each searched gap considers M+1 length
alternatives (0..M): the gap is extended greedily token by token, and every
length is scored by its token log-probabilities plus the log-probability of
the upcoming anchor token, so a zero-length gap (a merge of two segments)
competes on equal footing with longer fills. The final gap is a plain
greedy tail ending at the end-of-sequence marker or the length budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from segimt.core import (
    EOS,
    Feedback,
    Hypothesis,
    Provenance,
    Side,
    TokenSeq,
    Tokens,
    require_valid_feedback,
    token_tuple,
)
from segimt.scorer import LOG_ZERO, Scorer


@dataclass(frozen=True, slots=True)
class DecoderConfig:
    """Decoding limits.

    max_gap_len is the largest searched gap length (M). max_total_len caps
    the whole output; None means 2 * len(source) + 5. Argmax ties always go
    to the lowest vocabulary index, so decoding is reproducible
    bit-for-bit.
    """

    max_gap_len: int = 5
    max_total_len: Optional[int] = None
    tie_break: str = "lowest_token_id"

    def __post_init__(self) -> None:
        if self.max_gap_len < 0:
            raise ValueError("max_gap_len must be >= 0")
        if self.max_total_len is not None and self.max_total_len < 1:
            raise ValueError("max_total_len must be >= 1")
        if self.tie_break != "lowest_token_id":
            raise ValueError(f"unsupported tie_break {self.tie_break!r}")

    def effective_max_len(self, source_len: int) -> int:
        if self.max_total_len is not None:
            return self.max_total_len
        return 2 * source_len + 5


@dataclass(frozen=True, slots=True)
class GapFill:
    """One chosen gap: its tokens, their log-probs, and the anchored score
    that made this length win."""

    tokens: tuple[str, ...]
    token_logprobs: tuple[float, ...]
    anchored_logprob: float


def _argmax(dist: dict[str, float], vocab: Sequence[str], skip_eos: bool) -> tuple[str, float]:
    """Highest-probability token in vocabulary order (first wins ties)."""
    best_tok: Optional[str] = None
    best_lp = LOG_ZERO
    for tok in vocab:
        if skip_eos and tok == EOS:
            continue
        lp = dist.get(tok, LOG_ZERO)
        if best_tok is None or lp > best_lp:
            best_tok = tok
            best_lp = lp
    if best_tok is None:
        raise ValueError("vocabulary is empty")
    return best_tok, best_lp


def decode(source: Tokens, scorer: Scorer, config: DecoderConfig = DecoderConfig()) -> Hypothesis:
    """Greedy translation: per-step argmax until the end marker or the
    length cap. The end marker never appears in the surface tokens."""
    src = token_tuple(source)
    if not src:
        raise ValueError("source must be non-empty")
    limit = config.effective_max_len(len(src))
    vocab = scorer.target_vocab
    tokens: list[str] = []
    logprobs: list[float] = []
    while len(tokens) < limit:
        dist = scorer.next_token_log_dist(src, tokens)
        tok, lp = _argmax(dist, vocab, skip_eos=False)
        if tok == EOS:
            break
        tokens.append(tok)
        logprobs.append(lp)
    return Hypothesis(
        TokenSeq(tuple(tokens), Side.TARGET),
        tuple(logprobs),
        (Provenance.GENERATED,) * len(tokens),
    )


def fill_gap(
    source: Tokens,
    prefix: Tokens,
    anchor: Optional[Tokens],
    scorer: Scorer,
    config: DecoderConfig = DecoderConfig(),
    budget: Optional[int] = None,
) -> GapFill:
    """Choose the machine-filled gap that follows ``prefix``.

    With an anchor (the next validated segment's words), lengths 0..M are
    tried: the gap is grown greedily (the end marker is not a candidate
    inside a gap) and each length W is scored as the sum of its token
    log-probs plus log p(anchor[0] | prefix + gap). The best-scoring W wins;
    ties go to the shorter gap. With anchor=None (the final gap) the fill
    is plain greedy generation until the end marker or the budget, and the
    score is its total log-probability including the end marker when
    generation stopped there.

    ``budget`` caps the fill length; by default it is derived from the
    config's total-length cap, leaving room for the anchor itself.
    """
    src = token_tuple(source)
    if not src:
        raise ValueError("source must be non-empty")
    pre = list(token_tuple(prefix))
    limit = config.effective_max_len(len(src))
    vocab = scorer.target_vocab

    if anchor is None:
        if budget is None:
            budget = limit - len(pre)
        budget = max(0, budget)
        tokens: list[str] = []
        logprobs: list[float] = []
        total = 0.0
        while len(tokens) < budget:
            dist = scorer.next_token_log_dist(src, pre + tokens)
            tok, lp = _argmax(dist, vocab, skip_eos=False)
            if tok == EOS:
                total += lp
                break
            tokens.append(tok)
            logprobs.append(lp)
            total += lp
        return GapFill(tuple(tokens), tuple(logprobs), total)

    anchor_tokens = token_tuple(anchor)
    if not anchor_tokens:
        raise ValueError("anchor must be non-empty")
    if budget is None:
        budget = limit - len(pre) - len(anchor_tokens)
    w_max = max(0, min(config.max_gap_len, budget))

    walk: list[str] = []
    walk_lps: list[float] = []
    gap_sum = 0.0
    best_w = 0
    best_score = -float("inf")
    for w in range(w_max + 1):
        dist = scorer.next_token_log_dist(src, pre + walk)
        score = gap_sum + dist.get(anchor_tokens[0], LOG_ZERO)
        if score > best_score:
            best_score = score
            best_w = w
        if w < w_max:
            tok, lp = _argmax(dist, vocab, skip_eos=True)
            walk.append(tok)
            walk_lps.append(lp)
            gap_sum += lp
    return GapFill(tuple(walk[:best_w]), tuple(walk_lps[:best_w]), best_score)


def constrained_decode(
    source: Tokens,
    feedback: Feedback,
    scorer: Scorer,
    config: DecoderConfig = DecoderConfig(),
    final_gap_empty: bool = False,
) -> Hypothesis:
    """Regenerate a hypothesis that honors every feedback segment.

    The output is gap_0 . f_1 . gap_1 . ... . f_N . gap_N: segments appear
    verbatim, in order, with their model log-probs recorded and provenance
    marked forced; gaps are chosen by fill_gap. A gap is locked to length
    zero when the user's span information proves nothing belongs there:
    the leading gap when the first segment covers reference position 0, and
    any gap between segments whose ref_spans are adjacent (the user merged
    or typed them together). Callers that know the last segment reaches the
    end of the reference pass final_gap_empty=True to suppress the tail.
    """
    require_valid_feedback(feedback)
    src = token_tuple(source)
    if not src:
        raise ValueError("source must be non-empty")
    limit = config.effective_max_len(len(src))
    segments = feedback.segments
    total_forced = sum(len(seg) for seg in segments)
    if total_forced > limit:
        raise ValueError(f"forced length {total_forced} exceeds decoding limit {limit}")

    tokens: list[str] = []
    logprobs: list[float] = []
    provenance: list[Provenance] = []
    remaining_forced = total_forced

    for i, seg in enumerate(segments):
        if i == 0:
            locked = seg.ref_span is not None and seg.ref_span[0] == 0
        else:
            prev_span = segments[i - 1].ref_span
            locked = (
                prev_span is not None
                and seg.ref_span is not None
                and prev_span[1] + 1 == seg.ref_span[0]
            )
        if not locked:
            budget = limit - len(tokens) - remaining_forced
            gap = fill_gap(src, tokens, seg.words, scorer, config, budget=budget)
            tokens.extend(gap.tokens)
            logprobs.extend(gap.token_logprobs)
            provenance.extend([Provenance.GENERATED] * len(gap.tokens))
        for word in seg.words:
            dist = scorer.next_token_log_dist(src, tokens)
            tokens.append(word)
            logprobs.append(dist.get(word, LOG_ZERO))
            provenance.append(Provenance.FORCED)
        remaining_forced -= len(seg)

    if not final_gap_empty:
        tail = fill_gap(src, tokens, None, scorer, config, budget=limit - len(tokens))
        tokens.extend(tail.tokens)
        logprobs.extend(tail.token_logprobs)
        provenance.extend([Provenance.GENERATED] * len(tail.tokens))

    return Hypothesis(TokenSeq(tuple(tokens), Side.TARGET), tuple(logprobs), tuple(provenance))
