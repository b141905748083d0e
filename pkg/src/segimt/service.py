"""HTTP API for live interactive translation sessions.

A session holds the source, the current hypothesis, and an effort tally.
The browser UI validates spans of the current hypothesis (token ranges),
optionally types one correction word, and the server regenerates the
hypothesis under those constraints, charging the same selection, merge,
correction-move, and keystroke costs the simulated reviewer pays. All
effort arithmetic happens here; clients only display it.

Endpoints (JSON bodies, token arrays are arrays of strings):
    POST /api/sessions                     create (201)
    GET  /api/sessions/{id}                inspect (never mutates)
    POST /api/sessions/{id}/feedback       validate spans / correct a word
    POST /api/sessions/{id}/accept         finish (+1 mouse action)
    GET  /api/health                       liveness probe
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from segimt.core import (
    EffortTally,
    Feedback,
    Hypothesis,
    SegmentKind,
    Side,
    TokenSeq,
    ValidatedSegment,
)
from segimt.decoder import DecoderConfig, constrained_decode, decode
from segimt.scorer import Scorer
from segimt.simulator import (
    DEFAULT_SIM_CONFIG,
    IterationRecord,
    SessionLog,
    SimConfig,
    session_log_to_dict,
)

DEFAULT_IDLE_EVICTION_SECONDS = 30 * 60


class CreateSessionRequest(BaseModel):
    source: Optional[list[str]] = None
    text: Optional[str] = None
    reference: Optional[list[str]] = None


class CorrectionIn(BaseModel):
    after_segment_rank: int = Field(description="-1 places the word before all spans")
    word: str


class FeedbackRequest(BaseModel):
    spans: list[list[int]] = Field(default_factory=list, description="[start, end] inclusive")
    correction: Optional[CorrectionIn] = None


@dataclass
class LiveSession:
    id: str
    source: TokenSeq
    reference: Optional[TokenSeq]
    current: Hypothesis
    accumulated: EffortTally = field(default_factory=EffortTally)
    history: list[IterationRecord] = field(default_factory=list)
    state: str = "open"
    last_touch: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def view(self) -> dict:
        view = {
            "id": self.id,
            "state": self.state,
            "source": list(self.source.tokens),
            "hypothesis": list(self.current.tokens.tokens),
            "provenance": [p.value for p in self.current.provenance],
            "totals": self.accumulated.as_dict(),
            "iterations": len(self.history),
        }
        if self.state == "accepted":
            words = len(self.current.tokens)
            chars = self.current.tokens.char_count()
            if words > 0 and chars > 0:
                view["ratios"] = {
                    "wsr": 100.0 * self.accumulated.word_strokes / words,
                    "ksr": 100.0 * self.accumulated.key_strokes / chars,
                    "mar": 100.0 * self.accumulated.mouse_actions / chars,
                }
        return view


def _selection_cost(width: int, costs: SimConfig) -> int:
    return costs.select_one_word if width == 1 else costs.select_multi_word


def create_app(
    scorer: Scorer,
    decoder_config: DecoderConfig = DecoderConfig(),
    persist_path: Optional[str] = None,
    cors_origins: tuple[str, ...] = ("*",),
    idle_eviction_seconds: float = DEFAULT_IDLE_EVICTION_SECONDS,
    costs: SimConfig = DEFAULT_SIM_CONFIG,
) -> FastAPI:
    app = FastAPI(title="segimt session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    sessions: dict[str, LiveSession] = {}
    registry_lock = threading.Lock()

    def evict_idle() -> None:
        deadline = time.monotonic() - idle_eviction_seconds
        with registry_lock:
            stale = [sid for sid, s in sessions.items() if s.last_touch < deadline]
            for sid in stale:
                del sessions[sid]

    def get_session(session_id: str) -> LiveSession:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session.last_touch = time.monotonic()
        return session

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/sessions", status_code=201)
    def create_session(req: CreateSessionRequest) -> dict:
        evict_idle()
        if req.source is not None:
            tokens = tuple(req.source)
        elif req.text is not None:
            tokens = tuple(req.text.split())
        else:
            tokens = ()
        if not tokens:
            raise HTTPException(status_code=400, detail="empty source")
        try:
            source = TokenSeq(tokens, Side.SOURCE)
            reference = TokenSeq(tuple(req.reference), Side.TARGET) if req.reference else None
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        session = LiveSession(
            id=uuid.uuid4().hex,
            source=source,
            reference=reference,
            current=decode(source, scorer, decoder_config),
        )
        with registry_lock:
            sessions[session.id] = session
        return session.view()

    @app.get("/api/sessions/{session_id}")
    def read_session(session_id: str) -> dict:
        return get_session(session_id).view()

    @app.post("/api/sessions/{session_id}/feedback")
    def submit_feedback(session_id: str, req: FeedbackRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            if session.state != "open":
                raise HTTPException(status_code=409, detail="session already accepted")
            hyp_tokens = session.current.tokens.tokens
            spans = _check_spans(req.spans, len(hyp_tokens))
            if not spans and req.correction is None:
                raise HTTPException(status_code=422, detail="empty feedback turn")

            segments = [
                ValidatedSegment(hyp_tokens[start : end + 1], SegmentKind.VALIDATED)
                for start, end in spans
            ]
            mouse = sum(_selection_cost(end - start + 1, costs) for start, end in spans)
            for (_, prev_end), (next_start, _) in zip(spans, spans[1:]):
                if prev_end + 1 == next_start:
                    mouse += costs.merge_zero_words_between

            keys = 0
            words = 0
            if req.correction is not None:
                word = req.correction.word
                if not word or any(ch.isspace() for ch in word):
                    raise HTTPException(status_code=422, detail="correction must be one word")
                rank = req.correction.after_segment_rank
                if not -1 <= rank <= len(segments) - 1:
                    raise HTTPException(status_code=422, detail="correction rank out of range")
                segments.insert(rank + 1, ValidatedSegment((word,), SegmentKind.CORRECTION))
                mouse += costs.correction_move
                keys = len(word)
                words = 1

            feedback = Feedback(tuple(segments))
            before = session.current
            try:
                session.current = constrained_decode(
                    session.source, feedback, scorer, decoder_config
                )
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            delta = EffortTally(words, keys, mouse)
            session.accumulated = session.accumulated.add(delta)
            session.history.append(IterationRecord(before, feedback, mouse, keys, words))
            view = session.view()
            view["delta"] = delta.as_dict()
            return view

    @app.post("/api/sessions/{session_id}/accept")
    def accept_session(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            if session.state != "open":
                raise HTTPException(status_code=409, detail="session already accepted")
            session.accumulated = session.accumulated.add(
                EffortTally(0, 0, costs.accept_final)
            )
            session.state = "accepted"
            if persist_path:
                _persist(session, persist_path)
            return session.view()

    return app


def _check_spans(spans: list[list[int]], length: int) -> list[tuple[int, int]]:
    checked: list[tuple[int, int]] = []
    prev_end = -1
    for span in spans:
        if len(span) != 2:
            raise HTTPException(status_code=422, detail=f"span must be [start, end]: {span}")
        start, end = span
        if start < 0 or end >= length or start > end:
            raise HTTPException(status_code=422, detail=f"span out of range: {span}")
        if start <= prev_end:
            raise HTTPException(
                status_code=422, detail="spans must be ordered and non-overlapping"
            )
        checked.append((start, end))
        prev_end = end
    return checked


def _persist(session: LiveSession, path: str) -> None:
    """Append the finished session as one JSONL record.

    Live sessions carry no reference; the accepted hypothesis is the
    user-approved translation, so it is recorded as the reference.
    """
    import json

    final = session.current.tokens
    log = SessionLog(
        session.source, final, tuple(session.history), final, session.accumulated
    )
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(session_log_to_dict(log), ensure_ascii=False, sort_keys=True) + "\n")
