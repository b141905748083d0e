"""Translation quality metrics (BLEU, TER) and user-effort metrics
(WSR, KSR, MAR).

BLEU is corpus-level: clipped n-gram counts (n = 1..4) aggregated over the
corpus, geometric mean of precisions, brevity penalty exp(1 - r/c) when the
candidate is shorter than the reference; any zero precision yields 0 unless
an explicit smoothing epsilon is passed. TER counts greedy block shifts
plus word-level edit operations, normalized by reference length. Effort
ratios are micro-averaged over sessions; character counts include single
inter-word spaces.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from segimt.core import Tokens, token_tuple
from segimt.kernels import edit_distance
from segimt.simulator import SessionLog

BLEU_MAX_ORDER = 4
TER_MAX_SHIFT_BLOCK = 10


@dataclass(frozen=True, slots=True)
class CorpusScores:
    """One evaluation row: quality of initial hypotheses plus session
    effort, all as percentages."""

    bleu: float
    ter: float
    wsr: float
    ksr: float
    mar: float
    sentences: int

    def as_dict(self) -> dict:
        return {
            "bleu": self.bleu,
            "ter": self.ter,
            "wsr": self.wsr,
            "ksr": self.ksr,
            "mar": self.mar,
            "sentences": self.sentences,
        }


def _ngrams(tokens: Sequence[str], order: int) -> Counter:
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def bleu(
    hypotheses: Sequence[Tokens],
    references: Sequence[Tokens],
    smooth_eps: float = 0.0,
) -> float:
    """Corpus-level BLEU as a percentage in [0, 100].

    ``smooth_eps`` > 0 substitutes that precision for any zero precision;
    the default (0) reports 0 for the whole corpus on any zero precision.
    """
    if len(hypotheses) != len(references):
        raise ValueError(f"corpus sides differ: {len(hypotheses)} != {len(references)}")
    if not hypotheses:
        raise ValueError("empty corpus")

    matched = [0] * BLEU_MAX_ORDER
    total = [0] * BLEU_MAX_ORDER
    hyp_len = 0
    ref_len = 0
    for hyp_toks, ref_toks in zip(hypotheses, references):
        hyp = token_tuple(hyp_toks)
        ref = token_tuple(ref_toks)
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, BLEU_MAX_ORDER + 1):
            counts = _ngrams(hyp, n)
            if not counts:
                continue
            ref_counts = _ngrams(ref, n)
            total[n - 1] += sum(counts.values())
            matched[n - 1] += sum(min(c, ref_counts[g]) for g, c in counts.items())

    # Orders with no n-grams anywhere in the corpus (all sentences shorter
    # than n) are excluded from the geometric mean; otherwise identity
    # corpora of short sentences could not reach 100.
    log_precision_sum = 0.0
    orders = 0
    for n in range(BLEU_MAX_ORDER):
        if total[n] == 0:
            continue
        orders += 1
        precision = matched[n] / total[n]
        if precision == 0.0:
            if smooth_eps <= 0.0:
                return 0.0
            precision = smooth_eps
        log_precision_sum += math.log(precision)

    if hyp_len == 0 or orders == 0:
        return 0.0
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_precision_sum / orders)


def _intern(hyp: Sequence[str], ref: Sequence[str]) -> tuple[list[int], list[int]]:
    ids: dict[str, int] = {}
    return (
        [ids.setdefault(t, len(ids)) for t in hyp],
        [ids.setdefault(t, len(ids)) for t in ref],
    )


def _ref_blocks(ref_ids: Sequence[int]) -> set[tuple[int, ...]]:
    """All contiguous reference blocks up to the shift length cap."""
    blocks: set[tuple[int, ...]] = set()
    n = len(ref_ids)
    for start in range(n):
        for length in range(1, min(TER_MAX_SHIFT_BLOCK, n - start) + 1):
            blocks.add(tuple(ref_ids[start : start + length]))
    return blocks


def _best_shift(
    hyp: list[int], ref: list[int], blocks: set[tuple[int, ...]], current: int
) -> tuple[int, list[int]]:
    """Scan for the block move that most reduces edit distance.

    Scan order is pinned for determinism: block start ascending, block
    length ascending (1..10), insertion position ascending; only a strictly
    larger reduction replaces the incumbent, so the leftmost shortest
    winning move is applied.
    """
    best_gain = 0
    best_hyp = hyp
    n = len(hyp)
    for start in range(n):
        for length in range(1, min(TER_MAX_SHIFT_BLOCK, n - start) + 1):
            block = tuple(hyp[start : start + length])
            if block not in blocks:
                continue
            rest = hyp[:start] + hyp[start + length :]
            for pos in range(len(rest) + 1):
                if pos == start:
                    continue
                candidate = rest[:pos] + list(block) + rest[pos:]
                gain = current - edit_distance(candidate, ref)
                if gain > best_gain:
                    best_gain = gain
                    best_hyp = candidate
    return best_gain, best_hyp


def ter_stats(hypothesis: Tokens, reference: Tokens) -> tuple[int, int]:
    """(shifts + edit operations, reference length) for one pair."""
    hyp_toks = token_tuple(hypothesis)
    ref_toks = token_tuple(reference)
    if not ref_toks:
        raise ValueError("reference must be non-empty")
    hyp, ref = _intern(hyp_toks, ref_toks)
    blocks = _ref_blocks(ref)
    shifts = 0
    distance = edit_distance(hyp, ref)
    while distance > 0:
        gain, shifted = _best_shift(hyp, ref, blocks, distance)
        if gain <= 0:
            break
        shifts += 1
        hyp = shifted
        distance -= gain
    return shifts + distance, len(ref)


def ter(hypothesis: Tokens, reference: Tokens) -> float:
    """Translation edit rate for one sentence pair, as a percentage."""
    edits, ref_len = ter_stats(hypothesis, reference)
    return 100.0 * edits / ref_len


def corpus_ter(hypotheses: Sequence[Tokens], references: Sequence[Tokens]) -> float:
    """Micro-averaged TER: total edits over total reference words."""
    if len(hypotheses) != len(references):
        raise ValueError(f"corpus sides differ: {len(hypotheses)} != {len(references)}")
    if not hypotheses:
        raise ValueError("empty corpus")
    edits = 0
    words = 0
    for hyp, ref in zip(hypotheses, references):
        e, w = ter_stats(hyp, ref)
        edits += e
        words += w
    return 100.0 * edits / words


def effort_metrics(logs: Sequence[SessionLog]) -> tuple[float, float, float]:
    """Micro-averaged (WSR, KSR, MAR) percentages over session logs.

    WSR normalizes typed words by words in the final translations; KSR and
    MAR normalize typed characters and mouse actions by characters in the
    final translations (word characters plus single separating spaces).
    """
    if not logs:
        raise ValueError("empty session log list")
    word_strokes = 0
    key_strokes = 0
    mouse_actions = 0
    words = 0
    chars = 0
    for log in logs:
        if log.final_hypothesis.tokens != log.reference.tokens:
            raise ValueError("session did not end at its reference")
        word_strokes += log.totals.word_strokes
        key_strokes += log.totals.key_strokes
        mouse_actions += log.totals.mouse_actions
        words += len(log.final_hypothesis)
        chars += log.final_hypothesis.char_count()
    wsr = 100.0 * word_strokes / words
    ksr = 100.0 * key_strokes / chars
    mar = 100.0 * mouse_actions / chars
    return wsr, ksr, mar
