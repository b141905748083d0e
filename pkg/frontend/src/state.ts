/**
 * Pure view-state logic: span selection, correction placement, and
 * serialization of the current selection into the wire request.
 *
 * Invariants enforced here: selected spans never overlap; counters are
 * only ever copied from server responses (no client-side arithmetic);
 * serializing the selection yields exactly the spans the server will see.
 */

import type {
  EffortCounts,
  FeedbackRequest,
  PendingCorrection,
  SessionView,
  Span,
  ViewState,
} from "./types.js";

export function initialState(): ViewState {
  return {
    sessionId: null,
    sourceText: "",
    hypothesis: [],
    spans: [],
    correction: null,
    counters: { ws: 0, ks: 0, ma: 0 },
    ratios: null,
    accepted: false,
    connection: "idle",
    notice: null,
  };
}

/** Copy everything the server owns into the state; selection resets. */
export function applyServerView(state: ViewState, view: SessionView): ViewState {
  return {
    ...state,
    sessionId: view.id,
    sourceText: view.source.join(" "),
    hypothesis: [...view.hypothesis],
    spans: [],
    correction: null,
    counters: { ...view.totals },
    ratios: view.ratios ? { ...view.ratios } : state.ratios,
    accepted: view.state === "accepted",
    connection: "ok",
    notice: null,
  };
}

export type SelectResult = { ok: true; spans: Span[] } | { ok: false; reason: string };

/**
 * Add a span over [start, end] (inclusive). Overlaps with existing spans
 * are rejected; a span touching a neighbor is kept as a distinct span.
 */
export function trySelectSpan(
  spans: Span[],
  start: number,
  end: number,
  tokenCount: number,
): SelectResult {
  if (start > end) {
    [start, end] = [end, start];
  }
  if (start < 0 || end >= tokenCount) {
    return { ok: false, reason: "selection out of range" };
  }
  for (const span of spans) {
    if (start <= span.end && end >= span.start) {
      return { ok: false, reason: "selections must not overlap" };
    }
  }
  const next = [...spans, { start, end }];
  next.sort((a, b) => a.start - b.start);
  return { ok: true, spans: next };
}

export function clearSpan(spans: Span[], index: number): Span[] {
  return spans.filter((span) => index < span.start || index > span.end);
}

export function tokenSelected(spans: Span[], index: number): boolean {
  return spans.some((span) => index >= span.start && index <= span.end);
}

/**
 * Where a correction typed at tokenIndex sits relative to the selection:
 * the number of spans entirely before it. Tokens inside a validated span
 * cannot be corrected.
 */
export function correctionRank(spans: Span[], tokenIndex: number): number | null {
  if (tokenSelected(spans, tokenIndex)) {
    return null;
  }
  let rank = -1;
  for (const span of spans) {
    if (span.end < tokenIndex) {
      rank += 1;
    }
  }
  return rank;
}

export function setCorrection(
  state: ViewState,
  tokenIndex: number,
  text: string,
): PendingCorrection | null {
  if (correctionRank(state.spans, tokenIndex) === null) {
    return state.correction;
  }
  return { tokenIndex, text };
}

/** Serialize exactly what is on screen into the wire request. */
export function buildFeedbackRequest(state: ViewState): FeedbackRequest | null {
  const word = state.correction?.text.trim() ?? "";
  const hasCorrection = state.correction !== null && word.length > 0 && !/\s/.test(word);
  if (state.spans.length === 0 && !hasCorrection) {
    return null;
  }
  const spans: [number, number][] = state.spans.map((span) => [span.start, span.end]);
  let correction = null;
  if (hasCorrection && state.correction) {
    const rank = correctionRank(state.spans, state.correction.tokenIndex);
    if (rank === null) {
      return null;
    }
    correction = { after_segment_rank: rank, word };
  }
  return { spans, correction };
}

export function canSubmit(state: ViewState): boolean {
  return (
    !state.accepted &&
    state.connection !== "pending" &&
    state.sessionId !== null &&
    buildFeedbackRequest(state) !== null
  );
}

export function countersEqual(a: EffortCounts, b: EffortCounts): boolean {
  return a.ws === b.ws && a.ks === b.ks && a.ma === b.ma;
}
