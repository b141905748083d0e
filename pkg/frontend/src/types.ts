/** Wire types for the session service (all token arrays are string arrays). */

export interface EffortCounts {
  ws: number;
  ks: number;
  ma: number;
}

export interface EffortRatios {
  wsr: number;
  ksr: number;
  mar: number;
}

export interface SessionView {
  id: string;
  state: "open" | "accepted";
  source: string[];
  hypothesis: string[];
  provenance: string[];
  totals: EffortCounts;
  iterations: number;
  delta?: EffortCounts;
  ratios?: EffortRatios;
}

export interface CorrectionRequest {
  after_segment_rank: number;
  word: string;
}

export interface FeedbackRequest {
  spans: [number, number][];
  correction: CorrectionRequest | null;
}

/** One selected token range, inclusive on both ends. */
export interface Span {
  start: number;
  end: number;
}

export type TokenStatus = "unvalidated" | "selected" | "validated";

/** Pending one-word correction: which token it replaces and the typed text. */
export interface PendingCorrection {
  tokenIndex: number;
  text: string;
}

export interface ViewState {
  sessionId: string | null;
  sourceText: string;
  hypothesis: string[];
  spans: Span[];
  correction: PendingCorrection | null;
  counters: EffortCounts;
  ratios: EffortRatios | null;
  accepted: boolean;
  connection: "idle" | "pending" | "ok" | "error";
  notice: string | null;
}
