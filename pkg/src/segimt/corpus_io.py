"""Parallel corpus ingestion, session-log persistence, report emission.

All text is read as UTF-8 and NFC-normalized so character counts are
stable across platforms. Tokenization is whitespace splitting with
punctuation left attached to words.
"""

from __future__ import annotations

import csv
import io
import json
import unicodedata
from dataclasses import dataclass
from typing import Sequence

from segimt.core import Side, TokenSeq
from segimt.metrics import CorpusScores
from segimt.simulator import SessionLog, session_log_from_dict, session_log_to_dict


class CorpusFormatError(ValueError):
    """A corpus or log file is malformed."""


@dataclass(frozen=True, slots=True)
class ParallelCorpus:
    """Aligned (source, reference) sentence pairs."""

    pairs: tuple[tuple[TokenSeq, TokenSeq], ...]
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def sources(self) -> list[TokenSeq]:
        return [src for src, _ in self.pairs]

    def references(self) -> list[TokenSeq]:
        return [ref for _, ref in self.pairs]


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [unicodedata.normalize("NFC", line.rstrip("\n")) for line in fh]


def _tokenize_pairs(
    rows: Sequence[tuple[str, str]], name: str, lowercase: bool
) -> ParallelCorpus:
    pairs = []
    for lineno, (src, tgt) in enumerate(rows, start=1):
        if not src.strip() or not tgt.strip():
            raise CorpusFormatError(f"empty line at line {lineno}")
        if lowercase:
            src, tgt = src.lower(), tgt.lower()
        pairs.append(
            (TokenSeq.from_text(src, Side.SOURCE), TokenSeq.from_text(tgt, Side.TARGET))
        )
    return ParallelCorpus(tuple(pairs), name)


def load_parallel(source_path, target_path, lowercase: bool = False) -> ParallelCorpus:
    """Load a two-file corpus: one sentence per line, lines aligned."""
    src_lines = _read_lines(source_path)
    tgt_lines = _read_lines(target_path)
    if len(src_lines) != len(tgt_lines):
        raise CorpusFormatError(f"line count {len(src_lines)} != {len(tgt_lines)}")
    return _tokenize_pairs(
        list(zip(src_lines, tgt_lines)), name=str(source_path), lowercase=lowercase
    )


def load_parallel_tsv(tsv_path, lowercase: bool = False) -> ParallelCorpus:
    """Load a 2-column TSV corpus (source<TAB>reference per line)."""
    rows = []
    for lineno, line in enumerate(_read_lines(tsv_path), start=1):
        fields = line.split("\t")
        if len(fields) > 2:
            raise CorpusFormatError(f"extra field at line {lineno}")
        if len(fields) < 2:
            raise CorpusFormatError(f"missing field at line {lineno}")
        rows.append((fields[0], fields[1]))
    return _tokenize_pairs(rows, name=str(tsv_path), lowercase=lowercase)


def write_session_logs(logs: Sequence[SessionLog], path) -> None:
    """Write session logs as JSON Lines, one session per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for log in logs:
            fh.write(json.dumps(session_log_to_dict(log), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def read_session_logs(path) -> list[SessionLog]:
    logs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                logs.append(session_log_from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorpusFormatError(f"malformed session log at line {lineno}: {exc}") from exc
    return logs


def report_json(scores: CorpusScores) -> str:
    """Deterministic JSON report (sorted keys, trailing newline)."""
    return json.dumps(scores.as_dict(), sort_keys=True) + "\n"


def report_csv(scores: CorpusScores) -> str:
    """Header plus one CSV row, same fields as the JSON report."""
    fields = ["bleu", "ter", "wsr", "ksr", "mar", "sentences"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    writer.writerow([scores.as_dict()[f] for f in fields])
    return buf.getvalue()
