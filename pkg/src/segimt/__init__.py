"""Segment-based interactive machine translation workbench.

Pieces: immutable core types, pluggable next-token scorers (bundled toy
model, HTTP client), a feedback-constrained greedy decoder, a simulated
reviewer with keystroke/mouse accounting, quality and effort metrics,
corpus/log IO, a CLI, and a live-session HTTP service.
"""

from segimt.core import (
    EOS,
    UNK,
    EffortTally,
    Feedback,
    Hypothesis,
    Provenance,
    SegmentKind,
    Side,
    TokenSeq,
    ValidatedSegment,
    compose_skeleton,
    validate_feedback,
)
from segimt.decoder import DecoderConfig, GapFill, constrained_decode, decode, fill_gap
from segimt.metrics import CorpusScores, bleu, corpus_ter, effort_metrics, ter
from segimt.scorer import (
    LOG_ZERO,
    HttpScorer,
    Scorer,
    ToyScorer,
    load_toy_model,
    save_toy_model,
    sequence_log_prob,
)
from segimt.simulator import (
    IterationRecord,
    SessionLog,
    SimConfig,
    SimulationError,
    extract_feedback,
    lcs_match,
    run_session,
)

__version__ = "0.1.0"

__all__ = [
    "EOS",
    "UNK",
    "LOG_ZERO",
    "TokenSeq",
    "Side",
    "SegmentKind",
    "Provenance",
    "ValidatedSegment",
    "Feedback",
    "Hypothesis",
    "EffortTally",
    "compose_skeleton",
    "validate_feedback",
    "Scorer",
    "ToyScorer",
    "HttpScorer",
    "load_toy_model",
    "save_toy_model",
    "sequence_log_prob",
    "DecoderConfig",
    "GapFill",
    "decode",
    "fill_gap",
    "constrained_decode",
    "SimConfig",
    "IterationRecord",
    "SessionLog",
    "SimulationError",
    "lcs_match",
    "extract_feedback",
    "run_session",
    "CorpusScores",
    "bleu",
    "ter",
    "corpus_ter",
    "effort_metrics",
    "__version__",
]
