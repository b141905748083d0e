"""Simulated reviewer that drives a session to a perfect translation.

Each round the reviewer compares the hypothesis with the reference via
longest common subsequence, validates every maximal matched run, pays mouse
costs for selections and for merging runs that are adjacent in the
reference, corrects the leftmost missing reference word (one mouse move
plus one keystroke per character), and hands the feedback back to the
constrained decoder. The loop ends when hypothesis and reference are equal;
accepting costs one final mouse action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from segimt.core import (
    EffortTally,
    Feedback,
    Hypothesis,
    Provenance,
    SegmentKind,
    Side,
    TokenSeq,
    Tokens,
    ValidatedSegment,
    token_tuple,
)
from segimt.decoder import DecoderConfig, constrained_decode, decode
from segimt.kernels import lcs_pairs
from segimt.scorer import Scorer


@dataclass(frozen=True, slots=True)
class SimConfig:
    """Safety cap plus the fixed effort constants, listed for audit.

    Selections cost one mouse action for a one-word segment and two for a
    multi-word segment; merging two runs adjacent in the reference costs
    one action when a single hypothesis word sits between them, two when
    more do, and nothing when they already touch; a correction costs one
    move plus per-character keystrokes; accepting costs one action.
    """

    max_iterations: int = 1000
    select_one_word: int = 1
    select_multi_word: int = 2
    merge_zero_words_between: int = 0
    merge_one_word_between: int = 1
    merge_multi_word_between: int = 2
    correction_move: int = 1
    accept_final: int = 1

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


DEFAULT_SIM_CONFIG = SimConfig()


class SimulationError(RuntimeError):
    """A session failed to converge within the iteration cap."""


@dataclass(frozen=True, slots=True)
class IterationRecord:
    """One review round: what the user saw, did, and paid."""

    hypothesis_before: Hypothesis
    feedback: Feedback
    mouse_actions: int
    key_strokes: int
    word_strokes: int

    def __post_init__(self) -> None:
        has_correction = self.feedback.correction() is not None
        if self.word_strokes != (1 if has_correction else 0):
            raise ValueError("word_strokes must be 1 exactly when a correction exists")


@dataclass(frozen=True, slots=True)
class SessionLog:
    """Complete trace of one session, ending at the reference."""

    source: TokenSeq
    reference: TokenSeq
    iterations: tuple[IterationRecord, ...]
    final_hypothesis: TokenSeq
    totals: EffortTally

    def __post_init__(self) -> None:
        object.__setattr__(self, "iterations", tuple(self.iterations))
        if self.final_hypothesis.tokens != self.reference.tokens:
            raise ValueError("final hypothesis must equal the reference")


def lcs_match(hypothesis: Tokens, reference: Tokens) -> list[tuple[int, int]]:
    """Longest common subsequence as (hypothesis_index, reference_index)
    pairs, strictly increasing in both coordinates.

    Deterministic: the backtrace prefers diagonal moves on token equality
    and the hypothesis-advancing move on table ties.
    """
    hyp = token_tuple(hypothesis)
    ref = token_tuple(reference)
    ids: dict[str, int] = {}
    hyp_ids = [ids.setdefault(tok, len(ids)) for tok in hyp]
    ref_ids = [ids.setdefault(tok, len(ids)) for tok in ref]
    return lcs_pairs(hyp_ids, ref_ids)


@dataclass(frozen=True, slots=True)
class _Run:
    h_start: int
    h_end: int
    r_start: int
    r_end: int


def _match_runs(pairs: Sequence[tuple[int, int]]) -> list[_Run]:
    """Maximal runs of match pairs consecutive in BOTH sequences."""
    runs: list[_Run] = []
    for h, r in pairs:
        if runs and runs[-1].h_end + 1 == h and runs[-1].r_end + 1 == r:
            last = runs[-1]
            runs[-1] = _Run(last.h_start, h, last.r_start, r)
        else:
            runs.append(_Run(h, h, r, r))
    return runs


def extract_feedback(
    hypothesis: Tokens,
    reference: Tokens,
    previously_covered: set[int],
    config: SimConfig = DEFAULT_SIM_CONFIG,
) -> tuple[Feedback, int, int]:
    """Derive one round of feedback and its mouse/keystroke cost.

    Validated segments are the maximal LCS runs; selection cost is charged
    only for runs that cover at least one reference index not covered in an
    earlier round. Merge costs are charged per pair of runs adjacent in the
    reference, by the number of hypothesis words between them. The
    correction is the smallest-index uncovered reference word, inserted at
    its reference-order rank; when every reference word is already covered
    (the hypothesis embeds the whole reference) no correction is emitted
    and the feedback alone pins the complete reference.
    """
    hyp = token_tuple(hypothesis)
    ref = token_tuple(reference)
    pairs = lcs_match(hyp, ref)
    runs = _match_runs(pairs)

    mouse = 0
    segments: list[ValidatedSegment] = []
    for run in runs:
        width = run.r_end - run.r_start + 1
        if any(i not in previously_covered for i in range(run.r_start, run.r_end + 1)):
            mouse += config.select_one_word if width == 1 else config.select_multi_word
        segments.append(
            ValidatedSegment(
                ref[run.r_start : run.r_end + 1],
                SegmentKind.VALIDATED,
                (run.r_start, run.r_end),
            )
        )

    for prev, cur in zip(runs, runs[1:]):
        if prev.r_end + 1 == cur.r_start:
            between = cur.h_start - prev.h_end - 1
            if between == 0:
                mouse += config.merge_zero_words_between
            elif between == 1:
                mouse += config.merge_one_word_between
            else:
                mouse += config.merge_multi_word_between

    covered_now = {i for run in runs for i in range(run.r_start, run.r_end + 1)}
    keystrokes = 0
    correction_index = next((i for i in range(len(ref)) if i not in covered_now), None)
    if correction_index is not None:
        word = ref[correction_index]
        correction = ValidatedSegment((word,), SegmentKind.CORRECTION, (correction_index, correction_index))
        rank = sum(1 for seg in segments if seg.ref_span[0] < correction_index)
        segments.insert(rank, correction)
        mouse += config.correction_move
        keystrokes = len(word)

    return Feedback(tuple(segments)), mouse, keystrokes


def run_session(
    source: Tokens,
    reference: Tokens,
    scorer: Scorer,
    decoder_config: DecoderConfig = DecoderConfig(),
    sim_config: SimConfig = DEFAULT_SIM_CONFIG,
) -> SessionLog:
    """Run one full simulated session to a perfect translation."""
    src_seq = source if isinstance(source, TokenSeq) else TokenSeq(tuple(source), Side.SOURCE)
    ref_seq = reference if isinstance(reference, TokenSeq) else TokenSeq(tuple(reference), Side.TARGET)
    ref = ref_seq.tokens
    if not ref:
        raise ValueError("reference must be non-empty")

    hypothesis = decode(src_seq, scorer, decoder_config)
    covered: set[int] = set()
    records: list[IterationRecord] = []
    totals = EffortTally()

    while hypothesis.tokens.tokens != ref:
        if len(records) >= sim_config.max_iterations:
            raise SimulationError(
                f"no convergence after {sim_config.max_iterations} iterations "
                f"(decoder or scorer defect)"
            )
        feedback, mouse, keys = extract_feedback(hypothesis.tokens, ref_seq, covered, sim_config)
        words = 1 if feedback.correction() is not None else 0
        records.append(IterationRecord(hypothesis, feedback, mouse, keys, words))
        totals = totals.add(EffortTally(words, keys, mouse))
        covered |= feedback.covered_indices()

        reaches_end = feedback.segments[-1].ref_span[1] == len(ref) - 1
        hypothesis = constrained_decode(
            src_seq, feedback, scorer, decoder_config, final_gap_empty=reaches_end
        )

    totals = totals.add(EffortTally(0, 0, sim_config.accept_final))
    return SessionLog(src_seq, ref_seq, tuple(records), hypothesis.tokens, totals)


# ---------------------------------------------------------------------------
# JSON (de)serialization of session logs
# ---------------------------------------------------------------------------


def session_log_to_dict(log: SessionLog) -> dict:
    """Schema: source/reference token arrays, per-iteration feedback with
    effort fields, and totals. The per-iteration "hyp" object goes beyond
    the minimum schema so that round-trips are lossless."""
    return {
        "source": list(log.source.tokens),
        "reference": list(log.reference.tokens),
        "iterations": [
            {
                "feedback": [
                    {
                        "words": list(seg.words),
                        "kind": seg.kind.value,
                        "ref_span": list(seg.ref_span) if seg.ref_span else None,
                    }
                    for seg in rec.feedback.segments
                ],
                "ma": rec.mouse_actions,
                "ks": rec.key_strokes,
                "ws": rec.word_strokes,
                "hyp": {
                    "tokens": list(rec.hypothesis_before.tokens.tokens),
                    "logprobs": list(rec.hypothesis_before.token_logprobs),
                    "provenance": [p.value for p in rec.hypothesis_before.provenance],
                },
            }
            for rec in log.iterations
        ],
        "totals": log.totals.as_dict(),
    }


def session_log_from_dict(data: dict) -> SessionLog:
    iterations = []
    for it in data["iterations"]:
        segments = tuple(
            ValidatedSegment(
                tuple(seg["words"]),
                SegmentKind(seg["kind"]),
                tuple(seg["ref_span"]) if seg.get("ref_span") else None,
            )
            for seg in it["feedback"]
        )
        hyp = it["hyp"]
        iterations.append(
            IterationRecord(
                Hypothesis(
                    TokenSeq(tuple(hyp["tokens"]), Side.TARGET),
                    tuple(hyp["logprobs"]),
                    tuple(Provenance(p) for p in hyp["provenance"]),
                ),
                Feedback(segments),
                it["ma"],
                it["ks"],
                it["ws"],
            )
        )
    totals = data["totals"]
    reference = TokenSeq(tuple(data["reference"]), Side.TARGET)
    return SessionLog(
        TokenSeq(tuple(data["source"]), Side.SOURCE),
        reference,
        tuple(iterations),
        reference,
        EffortTally(totals["ws"], totals["ks"], totals["ma"]),
    )
