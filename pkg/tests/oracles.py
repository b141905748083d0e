"""Independent brute-force oracles.

Everything here re-derives expected values straight from the documented
contracts, with deliberately different code paths from the package
(dict-based DP, itertools enumeration, no interning, no kernels, no
caching), so tests compare two independent routes to the same answer.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

from segimt.core import BOS, EOS, UNK
from segimt.scorer import LOG_ZERO

# ---------------------------------------------------------------------------
# Toy scorer mixture
# ---------------------------------------------------------------------------


def toy_support(lex: dict, bigram: dict) -> list[str]:
    support = {EOS, UNK}
    for row in lex.values():
        support.update(row)
    for prev, row in bigram.items():
        if prev != BOS:
            support.add(prev)
        support.update(row)
    return sorted(support)


def toy_prob_oracle(
    lex: dict, bigram: dict, lam: float, alpha: float, source, prefix
) -> dict[str, float]:
    """Mixture probabilities evaluated directly from the raw tables."""
    support = toy_support(lex, bigram)
    size = len(support)

    def lex_prob(x: str, y: str) -> float:
        if x not in lex:
            x = UNK
        if x not in lex:
            return 1.0 / size  # synthesized uniform unknown-source row
        row = lex[x]
        return row.get(y, 0.0) / sum(row.values())

    context = prefix[-1] if prefix else BOS
    row = bigram.get(context, {})
    denom = sum(row.values()) + alpha * size
    out = {}
    for y in support:
        lexmix = sum(lex_prob(x, y) for x in source) / len(source)
        out[y] = lam * lexmix + (1.0 - lam) * (row.get(y, 0.0) + alpha) / denom
    return out


# ---------------------------------------------------------------------------
# LCS
# ---------------------------------------------------------------------------


def _is_subsequence(needle, haystack) -> bool:
    it = iter(haystack)
    return all(any(tok == h for h in it) for tok in needle)


def lcs_length_brute(a, b) -> int:
    """Max length over all subsequences of ``a`` also embedded in ``b``."""
    a, b = list(a), list(b)
    for k in range(min(len(a), len(b)), 0, -1):
        for idxs in itertools.combinations(range(len(a)), k):
            if _is_subsequence([a[i] for i in idxs], b):
                return k
    return 0


# ---------------------------------------------------------------------------
# BLEU / TER
# ---------------------------------------------------------------------------


def bleu_oracle(hypotheses, references, max_n: int = 4) -> float:
    precisions = []
    for n in range(1, max_n + 1):
        num = 0
        den = 0
        for hyp, ref in zip(hypotheses, references):
            hyp, ref = list(hyp), list(ref)
            hyp_grams = Counter(tuple(hyp[i : i + n]) for i in range(len(hyp) - n + 1))
            ref_grams = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
            num += sum(min(c, ref_grams.get(g, 0)) for g, c in hyp_grams.items())
            den += max(0, len(hyp) - n + 1)
        if den == 0:
            continue  # order absent from the corpus entirely
        if num == 0:
            return 0.0
        precisions.append(num / den)
    cand_len = sum(len(h) for h in hypotheses)
    ref_len = sum(len(r) for r in references)
    if cand_len == 0 or not precisions:
        return 0.0
    brevity = 1.0 if cand_len >= ref_len else math.exp(1.0 - ref_len / cand_len)
    return 100.0 * brevity * math.exp(sum(math.log(p) for p in precisions) / len(precisions))


def _lev_dict(a, b) -> int:
    dist = {(i, 0): i for i in range(len(a) + 1)}
    dist.update({(0, j): j for j in range(len(b) + 1)})
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            dist[(i, j)] = min(
                dist[(i - 1, j)] + 1,
                dist[(i, j - 1)] + 1,
                dist[(i - 1, j - 1)] + (a[i - 1] != b[j - 1]),
            )
    return dist[(len(a), len(b))]


def ter_oracle(hypothesis, reference, max_block: int = 10) -> float:
    """Greedy-shift TER re-derived with dict DP and plain list scanning."""
    hyp, ref = list(hypothesis), list(reference)
    ref_blocks = {
        tuple(ref[i:j])
        for i in range(len(ref))
        for j in range(i + 1, min(i + max_block, len(ref)) + 1)
    }
    shifts = 0
    distance = _lev_dict(hyp, ref)
    while distance > 0:
        best_gain, best_hyp = 0, None
        for start in range(len(hyp)):
            for length in range(1, min(max_block, len(hyp) - start) + 1):
                block = tuple(hyp[start : start + length])
                if block not in ref_blocks:
                    continue
                rest = hyp[:start] + hyp[start + length :]
                for pos in range(len(rest) + 1):
                    if pos == start:
                        continue
                    cand = rest[:pos] + list(block) + rest[pos:]
                    gain = distance - _lev_dict(cand, ref)
                    if gain > best_gain:
                        best_gain, best_hyp = gain, cand
        if best_hyp is None:
            break
        shifts += 1
        hyp = best_hyp
        distance -= best_gain
    return 100.0 * (shifts + distance) / len(ref)


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


def argmax_oracle(dist: dict[str, float], vocab, skip_eos: bool = False) -> tuple[str, float]:
    best_tok, best_lp = None, None
    for tok in vocab:
        if skip_eos and tok == EOS:
            continue
        lp = dist.get(tok, LOG_ZERO)
        if best_lp is None or lp > best_lp:
            best_tok, best_lp = tok, lp
    return best_tok, best_lp


def greedy_decode_oracle(scorer, source, limit: int) -> list[str]:
    """Stepwise argmax walk using only the scorer's public distribution."""
    out: list[str] = []
    while len(out) < limit:
        tok, _ = argmax_oracle(scorer.next_token_log_dist(source, out), scorer.target_vocab)
        if tok == EOS:
            break
        out.append(tok)
    return out


def gap_fill_oracle(scorer, source, prefix, anchor, max_gap: int):
    """Exhaustive search over every candidate gap sequence of length 0..M.

    Returns (best_w, best_score): candidates are enumerated W ascending and
    token sequences in vocabulary order, with only strictly better scores
    replacing the incumbent, mirroring the documented tie-breaks.
    """
    prefix = list(prefix)
    gap_vocab = [t for t in scorer.target_vocab if t != EOS]
    anchor_token = anchor[0]
    best_w, best_score = 0, None
    for w in range(max_gap + 1):
        for combo in itertools.product(gap_vocab, repeat=w):
            score = 0.0
            running = list(prefix)
            for tok in combo:
                score += scorer.next_token_log_dist(source, running).get(tok, LOG_ZERO)
                running.append(tok)
            score += scorer.next_token_log_dist(source, running).get(anchor_token, LOG_ZERO)
            if best_score is None or score > best_score:
                best_w, best_score = w, score
    return best_w, best_score


def constrained_decode_oracle(scorer, source, feedback, max_gap: int, limit: int) -> list[str]:
    """Skeleton walk with per-gap exhaustive anchored search.

    Gaps locked by adjacent ref_spans are skipped exactly as documented;
    the final gap is a stepwise-argmax tail. Intended for chain scorers,
    where every optimum is unique, so token-level comparison is exact.
    """
    out: list[str] = []
    segments = feedback.segments
    gap_vocab = [t for t in scorer.target_vocab if t != EOS]
    for i, seg in enumerate(segments):
        if i == 0:
            locked = seg.ref_span is not None and seg.ref_span[0] == 0
        else:
            prev = segments[i - 1].ref_span
            locked = prev is not None and seg.ref_span is not None and prev[1] + 1 == seg.ref_span[0]
        if not locked:
            budget = limit - len(out) - sum(len(s.words) for s in segments[i:])
            best_combo, best_score = (), None
            for w in range(min(max_gap, max(0, budget)) + 1):
                for combo in itertools.product(gap_vocab, repeat=w):
                    score = 0.0
                    running = out + list(combo)
                    for k, tok in enumerate(combo):
                        score += scorer.next_token_log_dist(source, out + list(combo[:k])).get(
                            tok, LOG_ZERO
                        )
                    score += scorer.next_token_log_dist(source, running).get(seg.words[0], LOG_ZERO)
                    if best_score is None or score > best_score:
                        best_combo, best_score = combo, score
            out.extend(best_combo)
        out.extend(seg.words)
    while len(out) < limit:
        tok, _ = argmax_oracle(scorer.next_token_log_dist(source, out), scorer.target_vocab)
        if tok == EOS:
            break
        out.append(tok)
    return out
