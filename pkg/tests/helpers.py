"""Shared test scaffolding: deterministic scorers and random-case builders."""

from __future__ import annotations

import hashlib
import random

from segimt.core import EOS, UNK, Feedback, SegmentKind, Side, TokenSeq, ValidatedSegment
from segimt.scorer import LOG_ZERO, ToyScorer


def ts(text: str) -> TokenSeq:
    return TokenSeq.from_text(text, Side.TARGET)


def ss(text: str) -> TokenSeq:
    return TokenSeq.from_text(text, Side.SOURCE)


class ScriptedScorer:
    """All probability mass on one scripted next token per exact prefix.

    The script is the union of the sentences' forced chains; on shared
    prefixes the first sentence wins (later sentences only need entries at
    prefixes the earlier ones never reach, because their common tokens are
    forced, not generated). Unscripted prefixes continue to end-of-sequence.
    """

    def __init__(self, sentences: list[str]):
        self.script: dict[tuple[str, ...], str] = {}
        tokens: set[str] = set()
        for sentence in sentences:
            words = sentence.split()
            tokens.update(words)
            for i, word in enumerate(words + [EOS]):
                self.script.setdefault(tuple(words[:i]), word)
        self._vocab = tuple(sorted(tokens | {EOS, UNK}))

    @property
    def target_vocab(self) -> tuple[str, ...]:
        return self._vocab

    def next_token_log_dist(self, source, prefix) -> dict[str, float]:
        nxt = self.script.get(tuple(prefix), EOS)
        return {t: (0.0 if t == nxt else LOG_ZERO) for t in self._vocab}


class ChainScorer:
    """Deterministic scorer whose next token is a seeded hash of the prefix.

    ``eos_allowed`` controls whether the chain may emit the end marker;
    gap-search oracle tests keep it off so greedy never leaves the chain.
    Hashing uses sha256, so behavior is stable across processes.
    """

    def __init__(self, vocab: list[str], seed: int, eos_allowed: bool = True):
        self._plain = tuple(sorted(vocab))
        self._vocab = tuple(sorted(set(vocab) | {EOS, UNK}))
        self._candidates = self._vocab if eos_allowed else self._plain
        self.seed = seed

    @property
    def target_vocab(self) -> tuple[str, ...]:
        return self._vocab

    def chain_next(self, prefix) -> str:
        digest = hashlib.sha256(
            ("%d\x00%s" % (self.seed, "\x1f".join(prefix))).encode("utf-8")
        ).digest()
        return self._candidates[int.from_bytes(digest[:8], "big") % len(self._candidates)]

    def next_token_log_dist(self, source, prefix) -> dict[str, float]:
        nxt = self.chain_next(tuple(prefix))
        return {t: (0.0 if t == nxt else LOG_ZERO) for t in self._vocab}


def random_toy_tables(
    rng: random.Random, n_src: int = 4, n_tgt: int = 6
) -> tuple[dict, dict, float, float]:
    """Random raw (lex, bigram, lambda, alpha) tables for a ToyScorer."""
    src_vocab = [f"s{i}" for i in range(n_src)]
    tgt_vocab = [f"t{i}" for i in range(n_tgt)]
    lex: dict[str, dict[str, float]] = {}
    for s in src_vocab:
        targets = rng.sample(tgt_vocab, rng.randint(1, n_tgt))
        weights = [rng.uniform(0.1, 1.0) for _ in targets]
        total = sum(weights)
        lex[s] = {t: w / total for t, w in zip(targets, weights)}
    bigram: dict[str, dict[str, float]] = {}
    for prev in ["<s>"] + tgt_vocab:
        if rng.random() < 0.2:
            continue  # exercise missing-context smoothing
        nexts = rng.sample(tgt_vocab + [EOS], rng.randint(1, n_tgt))
        bigram[prev] = {t: rng.uniform(0.0, 3.0) for t in nexts}
    return lex, bigram, rng.uniform(0.2, 0.9), rng.uniform(0.05, 0.5)


def random_toy_scorer(rng: random.Random, n_src: int = 4, n_tgt: int = 6) -> ToyScorer:
    lex, bigram, lam, alpha = random_toy_tables(rng, n_src, n_tgt)
    return ToyScorer(lex, bigram, lam=lam, alpha=alpha)


def random_source(rng: random.Random, scorer: ToyScorer) -> TokenSeq:
    words = [rng.choice(scorer.src_vocab) for _ in range(rng.randint(1, 5))]
    return TokenSeq(tuple(words), Side.SOURCE)


def random_feedback(
    rng: random.Random,
    vocab: list[str],
    max_segments: int = 3,
    with_spans: bool = False,
    max_total: int = 12,
) -> Feedback:
    """Random valid feedback: ordered segments, at most one correction."""
    n_segments = rng.randint(0, max_segments)
    segments = []
    correction_at = rng.randrange(n_segments) if n_segments and rng.random() < 0.5 else None
    next_ref = rng.randint(0, 2)
    total = 0
    for i in range(n_segments):
        length = 1 if i == correction_at else rng.randint(1, 3)
        if total + length > max_total:
            break
        words = tuple(rng.choice(vocab) for _ in range(length))
        span = None
        if with_spans:
            span = (next_ref, next_ref + length - 1)
            next_ref = span[1] + 1 + rng.randint(0, 2)
        kind = SegmentKind.CORRECTION if i == correction_at else SegmentKind.VALIDATED
        segments.append(ValidatedSegment(words, kind, span))
        total += length
    return Feedback(tuple(segments))
