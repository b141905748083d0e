/** Thin typed client for the session service. */

import type { FeedbackRequest, SessionView } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** What the app needs from a session backend (real client or test fake). */
export interface SessionApi {
  health(): Promise<{ status: string }>;
  createSession(text: string): Promise<SessionView>;
  getSession(id: string): Promise<SessionView>;
  submitFeedback(id: string, feedback: FeedbackRequest): Promise<SessionView>;
  accept(id: string): Promise<SessionView>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient implements SessionApi {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      payload = null;
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? String((payload as { detail: unknown }).detail)
          : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/api/health");
  }

  createSession(text: string): Promise<SessionView> {
    return this.request("POST", "/api/sessions", { text });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request("GET", `/api/sessions/${id}`);
  }

  submitFeedback(id: string, feedback: FeedbackRequest): Promise<SessionView> {
    return this.request("POST", `/api/sessions/${id}/feedback`, feedback);
  }

  accept(id: string): Promise<SessionView> {
    return this.request("POST", `/api/sessions/${id}/accept`);
  }
}
