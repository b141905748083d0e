"""Next-token scorers: the bundled deterministic toy model and a client
for external scorer services.

A scorer exposes a fixed target vocabulary and a deterministic
``next_token_log_dist(source, prefix)`` whose exponentials sum to 1 over
the vocabulary. Log-probabilities use natural logs; probability zero is
represented by the finite sentinel ``LOG_ZERO`` (never -inf, so values
serialize cleanly).
"""

from __future__ import annotations

import math
from typing import Optional, Protocol, Sequence, runtime_checkable

import requests

from segimt.core import BOS, EOS, UNK, Side, TokenSeq, Tokens, token_tuple

# Sentinel log-probability for events with zero probability. Finite so that
# sums of many terms stay representable and serializable.
LOG_ZERO = -1.0e30

DEFAULT_LAMBDA = 0.7
DEFAULT_ALPHA = 0.1


def safe_log(p: float) -> float:
    """log(p) clamped to [LOG_ZERO, 0.0]; p <= 0 maps to LOG_ZERO."""
    if p <= 0.0:
        return LOG_ZERO
    return min(0.0, max(LOG_ZERO, math.log(p)))


class ToyModelFormatError(ValueError):
    """Raised when a toy model file cannot be parsed or validated."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@runtime_checkable
class Scorer(Protocol):
    """Capability the decoder consumes: a closed vocabulary plus a
    deterministic next-token distribution."""

    @property
    def target_vocab(self) -> Sequence[str]: ...

    def next_token_log_dist(self, source: Tokens, prefix: Tokens) -> dict[str, float]: ...


class ToyScorer:
    """Lexical-translation + smoothed-bigram mixture model.

    p(y | prefix, src) = lam * lexmix(y | src) + (1 - lam) * pbigram(y | u)
    with lexmix(y | src) = (1/J) sum_j lex(y | x_j), u = last prefix token
    (or the virtual start context), and pbigram the add-alpha smoothed
    bigram row over the full support. Unknown source tokens are mapped to
    the ``<unk>`` row; a model without one gets a uniform row so the
    mixture stays normalized. The support always contains ``<unk>`` and
    ``</s>``.
    """

    def __init__(
        self,
        lex: dict[str, dict[str, float]],
        bigram: dict[str, dict[str, float]],
        lam: float = DEFAULT_LAMBDA,
        alpha: float = DEFAULT_ALPHA,
    ):
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {lam}")
        if alpha <= 0.0:
            raise ValueError(f"alpha must be > 0, got {alpha}")
        self.lam = lam
        self.alpha = alpha

        support: set[str] = {UNK, EOS}
        for row in lex.values():
            support.update(row)
        for prev, row in bigram.items():
            if prev != BOS:
                support.add(prev)
            support.update(row)
        self._support: tuple[str, ...] = tuple(sorted(support))
        self._support_size = len(self._support)

        self.src_vocab: tuple[str, ...] = tuple(sorted(lex))
        self.tgt_vocab = self._support

        self._lex: dict[str, dict[str, float]] = {}
        for src, row in lex.items():
            total = math.fsum(row.values())
            if abs(total - 1.0) > 1e-6:
                raise ValueError(f"lex row for {src!r} sums to {total}, expected 1")
            # Renormalize only when needed: rows already at 1 within 1e-9 are
            # kept bit-for-bit so save/load round-trips score identically.
            if abs(total - 1.0) > 1e-9:
                self._lex[src] = {tgt: p / total for tgt, p in row.items()}
            else:
                self._lex[src] = dict(row)
        if UNK not in self._lex:
            uniform = 1.0 / self._support_size
            self._lex[UNK] = {tok: uniform for tok in self._support}

        self._bigram = {prev: dict(row) for prev, row in bigram.items()}
        self._row_mass = {prev: math.fsum(row.values()) for prev, row in self._bigram.items()}
        self._bigram_cache: dict[str, dict[str, float]] = {}

    @property
    def target_vocab(self) -> tuple[str, ...]:
        return self._support

    def _smoothed_row(self, context: str) -> dict[str, float]:
        cached = self._bigram_cache.get(context)
        if cached is not None:
            return cached
        row = self._bigram.get(context, {})
        denom = self._row_mass.get(context, 0.0) + self.alpha * self._support_size
        smoothed = {tok: (row.get(tok, 0.0) + self.alpha) / denom for tok in self._support}
        self._bigram_cache[context] = smoothed
        return smoothed

    def next_token_log_dist(self, source: Tokens, prefix: Tokens) -> dict[str, float]:
        src = token_tuple(source)
        pre = token_tuple(prefix)
        if not src:
            raise ValueError("source must be non-empty")
        if EOS in pre:
            raise ValueError(f"prefix must not contain {EOS}")

        rows = [self._lex.get(tok, self._lex[UNK]) for tok in src]
        inv_j = 1.0 / len(rows)
        context = pre[-1] if pre else BOS
        pbigram = self._smoothed_row(context)
        lam = self.lam
        out: dict[str, float] = {}
        for tok in self._support:
            lexmix = math.fsum(row.get(tok, 0.0) for row in rows) * inv_j
            out[tok] = safe_log(lam * lexmix + (1.0 - lam) * pbigram[tok])
        return out


def sequence_log_prob(scorer: Scorer, source: Tokens, target: Tokens) -> float:
    """Log-probability of a complete target ending in the end marker.

    Equals the sum over positions of the scorer's next-token log
    distribution at each prefix; always <= 0.
    """
    tgt = token_tuple(target)
    if not tgt or tgt[-1] != EOS or EOS in tgt[:-1]:
        raise ValueError(f"target must end with a single {EOS}")
    total = 0.0
    for i, tok in enumerate(tgt):
        dist = scorer.next_token_log_dist(source, tgt[:i])
        total += dist.get(tok, LOG_ZERO)
    return min(0.0, total)


# ---------------------------------------------------------------------------
# Toy model file format
# ---------------------------------------------------------------------------

_SECTIONS = ("[params]", "[lex]", "[bigram]")


def load_toy_model(path) -> ToyScorer:
    """Parse a toy model file (sections [params], [lex], [bigram]).

    Lex rows must sum to 1 within 1e-6 (then get renormalized exactly);
    duplicates, negative probabilities, and malformed lines are errors
    reported with their line number.
    """
    lam: Optional[float] = None
    alpha: Optional[float] = None
    lex: dict[str, dict[str, float]] = {}
    bigram: dict[str, dict[str, float]] = {}
    lex_row_lines: dict[str, int] = {}

    section = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("["):
                if line not in _SECTIONS:
                    raise ToyModelFormatError(f"unknown section {line}", lineno)
                section = line
                continue
            if section == "[params]":
                key, sep, value = line.partition("=")
                if not sep:
                    raise ToyModelFormatError("expected key=value", lineno)
                key = key.strip()
                try:
                    num = float(value.strip())
                except ValueError:
                    raise ToyModelFormatError(f"bad number for {key}: {value.strip()!r}", lineno)
                if key == "lambda":
                    lam = num
                elif key == "alpha":
                    alpha = num
                else:
                    raise ToyModelFormatError(f"unknown parameter {key!r}", lineno)
            elif section == "[lex]":
                src, tgt, prob = _parse_entry(line, lineno)
                row = lex.setdefault(src, {})
                if tgt in row:
                    raise ToyModelFormatError(f"duplicate lex entry {src} {tgt}", lineno)
                row[tgt] = prob
                lex_row_lines.setdefault(src, lineno)
            elif section == "[bigram]":
                prev, nxt, prob = _parse_entry(line, lineno)
                row = bigram.setdefault(prev, {})
                if nxt in row:
                    raise ToyModelFormatError(f"duplicate bigram entry {prev} {nxt}", lineno)
                row[nxt] = prob
            else:
                raise ToyModelFormatError("entry before any section header", lineno)

    for src, row in lex.items():
        total = math.fsum(row.values())
        if abs(total - 1.0) > 1e-6:
            raise ToyModelFormatError(
                f"row sum for {src!r} is {total:.9g}, expected 1", lex_row_lines[src]
            )
    try:
        return ToyScorer(
            lex,
            bigram,
            lam=DEFAULT_LAMBDA if lam is None else lam,
            alpha=DEFAULT_ALPHA if alpha is None else alpha,
        )
    except ValueError as exc:
        raise ToyModelFormatError(str(exc)) from exc


def _parse_entry(line: str, lineno: int) -> tuple[str, str, float]:
    parts = line.split()
    if len(parts) != 3:
        raise ToyModelFormatError(f"expected 3 fields, got {len(parts)}", lineno)
    try:
        prob = float(parts[2])
    except ValueError:
        raise ToyModelFormatError(f"bad probability {parts[2]!r}", lineno)
    if prob < 0.0:
        raise ToyModelFormatError(f"negative probability {prob}", lineno)
    return parts[0], parts[1], prob


def save_toy_model(scorer: ToyScorer, path) -> None:
    """Write a scorer back out in the model file format (canonical order).

    Reloading the result scores identically bit-for-bit: floats are written
    with repr (exact round-trip) and row sums are order-independent.
    """
    lines = ["[params]", f"lambda={scorer.lam!r}", f"alpha={scorer.alpha!r}", "", "[lex]"]
    for src in sorted(scorer._lex):
        if src == UNK and UNK not in scorer.src_vocab:
            continue  # synthesized uniform row, not part of the model file
        for tgt in sorted(scorer._lex[src]):
            lines.append(f"{src} {tgt} {scorer._lex[src][tgt]!r}")
    lines.append("")
    lines.append("[bigram]")
    for prev in sorted(scorer._bigram):
        for nxt in sorted(scorer._bigram[prev]):
            lines.append(f"{prev} {nxt} {scorer._bigram[prev][nxt]!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# External scorer service client
# ---------------------------------------------------------------------------


class ScorerProtocolError(RuntimeError):
    """The external scorer service violated the wire contract."""


class HttpScorer:
    """Client for an external next-token scorer over HTTP+JSON.

    GET  {base}/v1/vocab                -> {"tokens": [...]}
    POST {base}/v1/next_token_logprobs  -> {"logprobs": {token: float}}

    Responses must cover the full vocabulary and exponentiate-sum to 1
    within 1e-4; violations raise ScorerProtocolError.
    """

    def __init__(self, base_url: str, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self._http = requests.Session()
        payload = self._get_json(self._http.get(f"{self.base_url}/v1/vocab", timeout=timeout))
        tokens = payload.get("tokens")
        if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
            raise ScorerProtocolError("vocab response missing token list")
        if EOS not in tokens or UNK not in tokens:
            raise ScorerProtocolError(f"vocab must include {EOS} and {UNK}")
        self._vocab: tuple[str, ...] = tuple(tokens)
        self._vocab_set = frozenset(tokens)

    @property
    def target_vocab(self) -> tuple[str, ...]:
        return self._vocab

    def next_token_log_dist(self, source: Tokens, prefix: Tokens) -> dict[str, float]:
        body = {"source": list(token_tuple(source)), "prefix": list(token_tuple(prefix))}
        resp = self._http.post(
            f"{self.base_url}/v1/next_token_logprobs", json=body, timeout=self.timeout
        )
        payload = self._get_json(resp)
        logprobs = payload.get("logprobs")
        if not isinstance(logprobs, dict):
            raise ScorerProtocolError("response missing logprobs map")
        if set(logprobs) != self._vocab_set:
            raise ScorerProtocolError("logprobs do not cover the vocabulary exactly")
        total = math.fsum(math.exp(min(0.0, float(lp))) for lp in logprobs.values())
        if abs(total - 1.0) > 1e-4:
            raise ScorerProtocolError(f"distribution mass {total:.6f} outside 1 +/- 1e-4")
        return {tok: min(0.0, max(LOG_ZERO, float(logprobs[tok]))) for tok in self._vocab}

    @staticmethod
    def _get_json(resp: requests.Response) -> dict:
        if resp.status_code != 200:
            raise ScorerProtocolError(f"scorer service returned HTTP {resp.status_code}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ScorerProtocolError("scorer service returned invalid JSON") from exc


def source_seq(text: str) -> TokenSeq:
    """Convenience: tokenize source-side text."""
    return TokenSeq.from_text(text, Side.SOURCE)


def target_seq(text: str) -> TokenSeq:
    """Convenience: tokenize target-side text."""
    return TokenSeq.from_text(text, Side.TARGET)
